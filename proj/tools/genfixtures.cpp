// Regenerates the pinned fixture files from their in-code builders and
// records their digests in a manifest. Run from the repository root:
//   genfixtures [output-dir]

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "hlab/cdf_demos.hpp"
#include "hlab/diagonal.hpp"

namespace fs = std::filesystem;
using namespace hlab;

namespace {

void write_file(const fs::path& path, const std::string& bytes) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << bytes;
}

}  // namespace

int main(int argc, char** argv) {
    fs::path root = argc > 1 ? argv[1] : "fixtures";
    nlohmann::ordered_json manifest;
    manifest["digest_algorithm"] = "sha256";
    nlohmann::ordered_json files = nlohmann::ordered_json::object();
    nlohmann::ordered_json outputs = nlohmann::ordered_json::object();

    auto pin = [&](const std::string& rel, const std::string& bytes) {
        write_file(root / rel, bytes);
        files[rel] = to_hex(sha256(bytes));
    };

    try {
        pin("good.hl", diagonal::build_good().image().bytes);
        pin("bad.hl", diagonal::build_bad().image().bytes);

        for (auto variant : {demos::DemoVariant::Good, demos::DemoVariant::Bad}) {
            demos::DemoFixture mul = demos::build_mul_demo(variant);
            pin("cdf/" + mul.name + ".hl", mul.source.bytes);
            outputs["cdf/" + mul.name + ".hl"] = mul.expected_output;

            demos::DemoFixture mul2 = demos::build_mul2_demo(variant);
            pin("cdf/" + mul2.name + ".hl", mul2.source.bytes);
            outputs["cdf/" + mul2.name + ".hl"] = mul2.expected_output;
            manifest["mul2_probe_address"] = *mul2.probe_address;
        }

        manifest["files"] = files;
        manifest["expected_outputs"] = outputs;
        write_file(root / "manifest.json", manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << "genfixtures: " << e.what() << "\n";
        return 1;
    }
    std::cout << "wrote fixtures under " << root.string() << "\n";
    return 0;
}
