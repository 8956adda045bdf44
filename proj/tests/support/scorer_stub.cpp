// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

// Wire-protocol stand-in used by the client and conformance tests.
// Modes: serve | bad-handshake | wrong-id | offset | exit-early

#include <iostream>
#include <string>
#include <string_view>

#include "cambench/causal/protocol.hpp"

int main(int argc, char** argv) {
    using namespace cambench::causal;
    const std::string_view mode = argc > 1 ? argv[1] : "serve";
    SyntheticScorer scorer;
    if (mode == "serve") {
        serve(std::cin, std::cout, std::cerr, scorer);
        return 0;
    }
    if (mode == "bad-handshake") {
        std::cout << R"({"protocol": "other", "version": 1})" << std::endl;
        return 0;
    }
    std::cout << handshake_line() << std::endl;
    std::string line;
    while (std::getline(std::cin, line)) {
        if (mode == "exit-early") return 0;
        std::optional<std::uint64_t> id;
        try {
            const auto req = parse_request(line, &id);
            if (mode == "wrong-id") {
                std::cout << response_line(req.id + 1, scorer.score(req.image)) << std::endl;
            } else {
                std::cout << response_line(req.id, scorer.score(req.image) + 0.25) << std::endl;
            }
        } catch (const std::exception& e) {
            if (id) std::cout << error_line(*id, e.what()) << std::endl;
        }
    }
    return 0;
}
