#pragma once

#include "logcy/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

namespace logcy {

// Exit codes: 0 success / valid / equivalent; 1 invalid or not equivalent;
// 2 unknown (budget exhausted); 3 parse or I/O error; 4 reduction stuck.
namespace exit_code {
constexpr int ok = 0;
constexpr int negative = 1;
constexpr int unknown = 2;
constexpr int parse = 3;
constexpr int stuck = 4;
}  // namespace exit_code

namespace detail {

inline Int env_bound_or(const Int& flag_bound) {
    if (flag_bound > 0) return flag_bound;
    if (const char* s = std::getenv("LOGCY_BOUND")) {
        try {
            return Int(std::string(s));
        } catch (...) {
            throw InvalidArgumentError("LOGCY_BOUND is not an integer");
        }
    }
    return 0;
}

inline std::string sanitize_label(const std::string& label) {
    std::string out;
    for (char ch : label) {
        if (ch == '(' || ch == '=' || ch == ',') out += '_';
        else if (ch == ')') continue;
        else out += ch;
    }
    return out;
}

inline std::pair<Int, Int> parse_param_range(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw InvalidArgumentError("--param-range expects lo:hi");
    try {
        return {Int(s.substr(0, colon)), Int(s.substr(colon + 1))};
    } catch (...) {
        throw InvalidArgumentError("--param-range expects integer bounds");
    }
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"homological equivalence toolkit for symplectic log Calabi-Yau surfaces"};
    app.require_subcommand(1);

    std::string path, path_b, trace_out, ambient_str, param_range = "-3:3", out_dir;
    std::int64_t bound = 0;
    std::uint64_t budget = 1000000;
    bool strict = false, indexed = false;
    int kcomp = 1, blowups = 0;
    std::uint64_t seed = 0;

    auto* c_validate = app.add_subcommand("validate", "check a divisor file against the log Calabi-Yau conditions");
    c_validate->add_option("file", path)->required();

    auto* c_reduce = app.add_subcommand("reduce", "blow down to a minimal model and print its label");
    c_reduce->add_option("file", path)->required();
    c_reduce->add_option("--trace", trace_out, "write the blow-down trace to this file");
    c_reduce->add_option("--bound", bound, "degree bound for the non-toric search");

    auto* c_classify = app.add_subcommand("classify", "match a minimal configuration against the model table");
    c_classify->add_option("file", path)->required();

    auto* c_equiv = app.add_subcommand("equiv", "decide homological equivalence of two divisor files");
    c_equiv->add_option("fileA", path)->required();
    c_equiv->add_option("fileB", path_b)->required();
    c_equiv->add_flag("--strict", strict, "also require matching area functionals");
    c_equiv->add_flag("--indexed", indexed, "match components by index instead of up to relabeling");
    c_equiv->add_option("--budget", budget, "node budget for the isometry search");

    auto* c_enum = app.add_subcommand("enumerate", "write a corpus of minimal models and random blow-ups");
    c_enum->add_option("--ambient", ambient_str,
                       "rational | sphere-product | hirzebruch-one | elliptic-trivial | elliptic-nontrivial")
        ->required();
    c_enum->add_option("--k", kcomp, "component count")->required();
    c_enum->add_option("--param-range", param_range, "parameter range lo:hi (default -3:3)");
    c_enum->add_option("--blowups", blowups, "random blow-up variants per model");
    c_enum->add_option("--seed", seed, "seed for the blow-up variants");
    c_enum->add_option("--out", out_dir, "output directory")->required();

    auto* c_dot = app.add_subcommand("dot", "print the dual graph in DOT form");
    c_dot->add_option("file", path)->required();

    std::vector<const char*> argv;
    argv.push_back("logcy");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*c_validate) {
            auto D = read_divisor_file(path);
            auto rep = validate(D);
            std::cout << rep.to_string();
            if (rep.ok()) std::cout << "\n";
            return rep.ok() ? exit_code::ok : exit_code::negative;
        }
        if (*c_reduce) {
            auto D = read_divisor_file(path);
            auto rep = validate(D);
            if (!rep.ok()) {
                std::cout << rep.to_string();
                return exit_code::negative;
            }
            ReduceOptions opts;
            opts.bound = detail::env_bound_or(Int(bound));
            ReductionTrace trace;
            try {
                trace = reduce_to_minimal(D, opts);
            } catch (const StuckNonMinimalError& e) {
                std::cout << e.what() << "\n";
                return exit_code::stuck;
            }
            if (!trace_out.empty()) {
                std::ofstream out(trace_out);
                if (!out) throw Error("cannot write " + trace_out);
                out << trace_to_string(trace);
            }
            std::cout << trace.label.to_string() << "\n";
            std::cout << "steps: " << trace.steps.size() << "\n";
            std::cout << "exhaustive: " << (trace.exhaustive ? "true" : "false") << "\n";
            return exit_code::ok;
        }
        if (*c_classify) {
            auto D = read_divisor_file(path);
            auto rep = validate(D);
            if (!rep.ok()) {
                std::cout << rep.to_string();
                return exit_code::negative;
            }
            try {
                std::cout << classify_minimal(D).to_string() << "\n";
            } catch (const Error& e) {
                std::cout << e.what() << "\n";
                return exit_code::negative;
            }
            return exit_code::ok;
        }
        if (*c_equiv) {
            auto A = read_divisor_file(path);
            auto B = read_divisor_file(path_b);
            for (const auto* d : {&A, &B}) {
                auto rep = validate(*d);
                if (!rep.ok()) {
                    std::cout << rep.to_string();
                    return exit_code::negative;
                }
            }
            auto verdict = decide(A, B, indexed ? DecideMode::Indexed : DecideMode::Unindexed, strict, budget);
            switch (verdict.status) {
                case VerdictStatus::Equivalent: {
                    std::cout << (strict ? "strictly equivalent" : "equivalent") << "\n";
                    const auto& m = verdict.witness->m;
                    for (int i = 0; i < m.rows; ++i) {
                        std::cout << "  [";
                        for (int j = 0; j < m.cols; ++j) std::cout << (j ? " " : "") << m(i, j);
                        std::cout << "]\n";
                    }
                    return exit_code::ok;
                }
                case VerdictStatus::NotEquivalent:
                    std::cout << "not equivalent: " << verdict.obstruction << "\n";
                    return exit_code::negative;
                case VerdictStatus::Unknown:
                    std::cout << "unknown: " << verdict.obstruction << "\n";
                    return exit_code::unknown;
            }
            return exit_code::unknown;
        }
        if (*c_enum) {
            AmbientLattice amb;
            if (ambient_str == "rational") amb = AmbientLattice::rational(0);
            else if (ambient_str == "sphere-product") amb = AmbientLattice::sphere_product();
            else if (ambient_str == "hirzebruch-one") amb = AmbientLattice::hirzebruch_one();
            else if (ambient_str == "elliptic-trivial") amb = AmbientLattice::elliptic_ruled(Twist::Trivial, 0);
            else if (ambient_str == "elliptic-nontrivial") amb = AmbientLattice::elliptic_ruled(Twist::Nontrivial, 0);
            else throw InvalidArgumentError("unknown ambient '" + ambient_str + "'");
            auto [plo, phi] = detail::parse_param_range(param_range);
            auto configs = enumerate_minimal(amb, kcomp, plo, phi);
            std::filesystem::create_directories(out_dir);
            std::mt19937_64 rng(seed);
            int written = 0;
            for (auto& cfg : configs) {
                std::string base = detail::sanitize_label(classify_minimal(cfg).to_string());
                write_divisor_file(out_dir + "/" + base + ".json", cfg);
                ++written;
                for (int i = 1; i <= blowups; ++i) {
                    DivisorConfig cur = cfg;
                    int len = 1 + static_cast<int>(rng() % 6);
                    for (int s = 0; s < len; ++s) cur = random_blowup(cur, rng).config;
                    write_divisor_file(out_dir + "/" + base + "__bu" + std::to_string(i) + ".json", cur);
                    ++written;
                }
            }
            std::cout << written << " files written to " << out_dir << "\n";
            return exit_code::ok;
        }
        if (*c_dot) {
            auto D = read_divisor_file(path);
            auto rep = validate(D);
            if (!rep.ok()) {
                std::cout << rep.to_string();
                return exit_code::negative;
            }
            std::cout << dot_export(D);
            return exit_code::ok;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::parse;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::negative;
    }
    return exit_code::ok;
}

}  // namespace logcy
