#include "logcy/cli.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace logcy;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("logcy_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

ClassVector cv(const AmbientLattice& L, std::vector<Int> c) { return ClassVector(L, std::move(c)); }

struct CaptureOut {
    std::stringstream buffer;
    std::streambuf* old;
    CaptureOut() : old(std::cout.rdbuf(buffer.rdbuf())) {}
    ~CaptureOut() { std::cout.rdbuf(old); }
    std::string text() { return buffer.str(); }
};

void write_b3(const std::string& path) {
    auto r0 = AmbientLattice::rational(0);
    write_divisor_file(path, make_config(r0, {cv(r0, {1}), cv(r0, {1}), cv(r0, {1})}));
}

}  // namespace

TEST_CASE("validate command") {
    TempDir tmp;
    write_b3(tmp.file("b3.json"));
    {
        CaptureOut cap;
        CHECK(run_cli({"validate", tmp.file("b3.json")}) == 0);
        CHECK(cap.text().find("valid") != std::string::npos);
    }

    // components summing to 2H
    auto r0 = AmbientLattice::rational(0);
    auto bad = make_config(r0, {cv(r0, {1}), cv(r0, {1})});
    write_divisor_file(tmp.file("bad.json"), bad);
    {
        CaptureOut cap;
        CHECK(run_cli({"validate", tmp.file("bad.json")}) == 1);
        CHECK(cap.text().find("anticanonical condition failed") != std::string::npos);
    }

    // genus-1 component with k = 2 cites the torus-or-cycle rule
    auto r1 = AmbientLattice::rational(1);
    auto torus2 = make_config(r1, {cv(r1, {3, -1}), cv(r1, {0, 0})});
    write_divisor_file(tmp.file("torus2.json"), torus2);
    {
        CaptureOut cap;
        CHECK(run_cli({"validate", tmp.file("torus2.json")}) == 1);
        CHECK(cap.text().find("torus or a cycle of spheres") != std::string::npos);
    }

    {
        std::ofstream out(tmp.file("broken.json"));
        out << "{ not json";
    }
    CHECK(run_cli({"validate", tmp.file("broken.json")}) == 3);
    CHECK(run_cli({"validate", tmp.file("missing.json")}) == 3);
}

TEST_CASE("reduce command") {
    TempDir tmp;
    auto r2 = AmbientLattice::rational(2);
    write_divisor_file(tmp.file("torus.json"), make_config(r2, {cv(r2, {3, -1, -1})}));
    {
        CaptureOut cap;
        CHECK(run_cli({"reduce", tmp.file("torus.json"), "--trace", tmp.file("trace.jsonl")}) == 0);
        auto text = cap.text();
        CHECK(text.find("B1") != std::string::npos);
        CHECK(text.find("steps: 2") != std::string::npos);
        CHECK(text.find("exhaustive: true") != std::string::npos);
    }
    // the trace replays onto the final configuration
    std::ifstream in(tmp.file("trace.jsonl"));
    std::stringstream ss;
    ss << in.rdbuf();
    auto replayed = replay_trace(read_divisor_file(tmp.file("torus.json")), ss.str());
    CHECK(replayed.lattice == AmbientLattice::rational(0));

    write_b3(tmp.file("b3.json"));
    {
        CaptureOut cap;
        CHECK(run_cli({"reduce", tmp.file("b3.json")}) == 0);
        CHECK(cap.text().find("steps: 0") != std::string::npos);
    }
}

TEST_CASE("classify command") {
    TempDir tmp;
    auto h1 = AmbientLattice::hirzebruch_one();
    write_divisor_file(tmp.file("d2b.json"), make_config(h1, {cv(h1, {1, 0}), cv(h1, {0, 2})}));
    {
        CaptureOut cap;
        CHECK(run_cli({"classify", tmp.file("d2b.json")}) == 0);
        CHECK(cap.text().find("D2b") != std::string::npos);
    }
    write_divisor_file(tmp.file("torus.json"), make_config(h1, {cv(h1, {1, 2})}));
    {
        CaptureOut cap;
        CHECK(run_cli({"classify", tmp.file("torus.json")}) == 1);
    }
}

TEST_CASE("equiv command exit codes") {
    TempDir tmp;
    write_b3(tmp.file("a.json"));
    write_b3(tmp.file("b.json"));
    {
        CaptureOut cap;
        CHECK(run_cli({"equiv", tmp.file("a.json"), tmp.file("b.json")}) == 0);
        CHECK(cap.text().find("equivalent") == 0);
    }
    auto r0 = AmbientLattice::rational(0);
    write_divisor_file(tmp.file("b2.json"), make_config(r0, {cv(r0, {1}), cv(r0, {2})}));
    {
        CaptureOut cap;
        CHECK(run_cli({"equiv", tmp.file("a.json"), tmp.file("b2.json")}) == 1);
        CHECK(cap.text().find("not equivalent") == 0);
    }
}

TEST_CASE("dot command") {
    TempDir tmp;
    auto sp = AmbientLattice::sphere_product();
    auto C4 = make_config(sp, {cv(sp, {1, -1}), cv(sp, {1, 1}), cv(sp, {0, 1}), cv(sp, {0, 1})});
    write_divisor_file(tmp.file("c4.json"), C4);
    CaptureOut cap;
    CHECK(run_cli({"dot", tmp.file("c4.json")}) == 0);
    auto text = cap.text();
    CHECK(text.find("graph") == 0);
    CHECK(text.find("[label=\"2\"]") != std::string::npos);
    CHECK(text.find("[label=\"-2\"]") != std::string::npos);
}

TEST_CASE("enumerate command is reproducible") {
    TempDir tmp;
    auto run_once = [&](const std::string& dir) {
        CaptureOut cap;
        REQUIRE(run_cli({"enumerate", "--ambient", "sphere-product", "--k", "2", "--param-range", "-1:1",
                         "--blowups", "2", "--seed", "9", "--out", tmp.file(dir)}) == 0);
        return cap.text();
    };
    auto first = run_once("a");
    auto second = run_once("b");
    CHECK(first.find("9 files written") != std::string::npos);
    CHECK(second.find("9 files written") != std::string::npos);

    for (const auto& entry : fs::directory_iterator(tmp.file("a"))) {
        auto other = fs::path(tmp.file("b")) / entry.path().filename();
        REQUIRE(fs::exists(other));
        std::ifstream f1(entry.path()), f2(other);
        std::stringstream s1, s2;
        s1 << f1.rdbuf();
        s2 << f2.rdbuf();
        CHECK(s1.str() == s2.str());
        // every emitted file validates
        CHECK(validate(read_divisor_file(entry.path().string())).ok());
    }
}

TEST_CASE("LOGCY_BOUND overrides the default search bound") {
    TempDir tmp;
    auto r2 = AmbientLattice::rational(2);
    write_divisor_file(tmp.file("torus.json"), make_config(r2, {cv(r2, {3, -1, -1})}));
    setenv("LOGCY_BOUND", "25", 1);
    CaptureOut cap;
    CHECK(run_cli({"reduce", tmp.file("torus.json")}) == 0);
    unsetenv("LOGCY_BOUND");
    CHECK(cap.text().find("B1") != std::string::npos);
}
