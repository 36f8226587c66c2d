#pragma once

#include <json.hpp>

#include "hlab/diagonal.hpp"
#include "helpers.hpp"

namespace hlab::test {

struct LoadedCorpus {
    std::vector<diagonal::CorpusCase> cases;
    std::vector<std::string> expects;  // per case: "halts", "runs-forever" or ""
};

inline LoadedCorpus load_corpus(const std::string& dir) {
    nlohmann::json manifest = nlohmann::json::parse(read_file(dir + "/manifest.json"));
    LoadedCorpus out;
    for (const auto& entry : manifest.at("cases")) {
        std::string file = entry.at("file").get<std::string>();
        lang::Value input = lang::Value::integer(0);
        if (entry.contains("input") && !entry.at("input").is_null()) {
            const auto& in = entry.at("input");
            if (in.contains("int"))
                input = lang::Value::integer(in.at("int").get<std::int64_t>());
            else
                input = lang::quote(
                    lang::parse({read_file(dir + "/" + in.at("prog").get<std::string>()),
                                 in.at("prog").get<std::string>()}));
        }
        out.cases.push_back(
            {file, lang::parse({read_file(dir + "/" + file), file}), std::move(input)});
        out.expects.push_back(entry.value("expect", ""));
    }
    return out;
}

}  // namespace hlab::test
