/*
Copyright 2026 The lmzip Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "test_util.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using lmz::testing::TempDir;

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& data)
{
    std::ofstream(p, std::ios::binary) << data;
}

// Runs the CLI through the shell with stdout and stderr captured together.
RunResult run(const TempDir& dir, const std::string& args)
{
    const auto log = dir / "cli.log";
    const std::string cmd = std::string(LMZIP_CLI_PATH) + " " + args + " > '" + log.string() + "' 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(log);
    return r;
}

std::string q(const fs::path& p)
{
    return "'" + p.string() + "'";
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("compress and decompress a file with every codec")
    {
        TempDir dir;
        const auto text = lmz::testing::corpus().substr(0, 20000);
        spit(dir / "in.txt", text);
        for (const char* codec : {"rank", "tbyt", "ac"}) {
            CAPTURE(codec);
            const auto lmz = dir / (std::string(codec) + ".lmz");
            const auto back = dir / (std::string(codec) + ".out");
            auto c = run(dir, "compress " + q(dir / "in.txt") + " -o " + q(lmz) + " --codec " + codec +
                                  " --order 3 --memory 4096");
            CHECK(c.status == 0);
            CHECK(c.out.find("H_ub") != std::string::npos);
            CHECK(c.out.find("rho_file") != std::string::npos);
            auto d = run(dir, "decompress " + q(lmz) + " -o " + q(back));
            CHECK(d.status == 0);
            CHECK(slurp(back) == text);
        }
    }

    TEST_CASE("default output name drops the suffix")
    {
        TempDir dir;
        spit(dir / "a.txt", "hello hello hello");
        REQUIRE(run(dir, "compress " + q(dir / "a.txt") + " -o " + q(dir / "b.lmz")).status == 0);
        REQUIRE(run(dir, "decompress " + q(dir / "b.lmz")).status == 0);
        CHECK(slurp(dir / "b") == "hello hello hello");
    }

    TEST_CASE("usage errors exit with 2")
    {
        TempDir dir;
        spit(dir / "in.txt", "abc");
        CHECK(run(dir, "").status == 2);
        CHECK(run(dir, "compress " + q(dir / "in.txt") + " --codec zip").status == 2);
        CHECK(run(dir, "compress " + q(dir / "in.txt") + " --order 13").status == 2);
        CHECK(run(dir, "compress " + q(dir / "in.txt") + " --no-such-flag").status == 2);
        CHECK(run(dir, "frobnicate").status == 2);
    }

    TEST_CASE("missing input exits with 1")
    {
        TempDir dir;
        const auto r = run(dir, "compress " + q(dir / "absent.txt") + " -o " + q(dir / "x.lmz"));
        CHECK(r.status == 1);
        CHECK(!r.out.empty());
        CHECK(!fs::exists(dir / "x.lmz"));
    }

    TEST_CASE("damaged containers exit with 3")
    {
        TempDir dir;
        spit(dir / "in.txt", lmz::testing::corpus().substr(0, 5000));
        REQUIRE(run(dir, "compress " + q(dir / "in.txt") + " -o " + q(dir / "c.lmz") + " --order 2 --memory 256")
                    .status == 0);
        auto bytes = slurp(dir / "c.lmz");
        bytes[bytes.size() / 2] ^= 0x10;
        spit(dir / "bad.lmz", bytes);
        CHECK(run(dir, "decompress " + q(dir / "bad.lmz") + " -o " + q(dir / "bad.out")).status == 3);
        spit(dir / "short.lmz", bytes.substr(0, 30));
        CHECK(run(dir, "decompress " + q(dir / "short.lmz") + " -o " + q(dir / "short.out")).status == 3);
    }

    TEST_CASE("predictor flags that disagree with the header exit with 4")
    {
        TempDir dir;
        spit(dir / "in.txt", "the cat sat on the mat");
        REQUIRE(run(dir, "compress " + q(dir / "in.txt") + " -o " + q(dir / "c.lmz") + " --order 2 --memory 256")
                    .status == 0);
        const auto base = "decompress " + q(dir / "c.lmz") + " -o " + q(dir / "out.txt");
        CHECK(run(dir, base + " --order 3").status == 4);
        CHECK(run(dir, base + " --memory 512").status == 4);
        CHECK(run(dir, base + " --predictor uniform").status == 4);
        CHECK(run(dir, base + " --order 2 --memory 256").status == 0);
        CHECK(slurp(dir / "out.txt") == "the cat sat on the mat");
    }

    TEST_CASE("unreachable external predictor exits with 5")
    {
        TempDir dir;
        spit(dir / "in.txt", "abc");
        const auto r = run(dir, "compress " + q(dir / "in.txt") + " -o " + q(dir / "c.lmz") +
                                    " --predictor 'external:exec:exit 0' --bridge-timeout-ms 2000");
        CHECK(r.status == 5);
    }

    TEST_CASE("external predictor through the fake server")
    {
        TempDir dir;
        const auto text = lmz::testing::corpus().substr(0, 2000);
        spit(dir / "in.txt", text);
        const std::string pred = std::string("'external:exec:") + LMZIP_FAKE_SERVER_PATH + " --tag cli' --memory 4096";
        REQUIRE(run(dir, "compress " + q(dir / "in.txt") + " -o " + q(dir / "c.lmz") + " --predictor " + pred)
                    .status == 0);
        CHECK(run(dir, "decompress " + q(dir / "c.lmz") + " -o " + q(dir / "out.txt") + " --predictor " + pred)
                  .status == 0);
        CHECK(slurp(dir / "out.txt") == text);

        const std::string other = std::string("'external:exec:") + LMZIP_FAKE_SERVER_PATH + " --tag other' --memory 4096";
        CHECK(run(dir, "decompress " + q(dir / "c.lmz") + " -o " + q(dir / "o2.txt") + " --predictor " + other)
                  .status == 4);
    }

    TEST_CASE("estimate reports the bound and ratios")
    {
        TempDir dir;
        spit(dir / "in.txt", lmz::testing::corpus().substr(0, 10000));
        const auto r = run(dir, "estimate " + q(dir / "in.txt") + " --order 3 --memory 64 --codec all");
        CHECK(r.status == 0);
        for (const char* label : {"H_ub", "rho_rank", "rho_tbyt", "rho_ac", "rho_deflate", "N_c", "N_T"})
            CHECK_MESSAGE(r.out.find(label) != std::string::npos, label);

        spit(dir / "empty.txt", "");
        CHECK(run(dir, "estimate " + q(dir / "empty.txt")).status == 1);
    }

    TEST_CASE("bench writes csv")
    {
        TempDir dir;
        spit(dir / "in.txt", lmz::testing::corpus().substr(0, 3000));
        const auto r = run(dir, "bench " + q(dir / "in.txt") + " --batch-tokens 1000 --memories 4,16 --order 2 " +
                                    "--report csv -o " + q(dir / "r.csv"));
        CHECK(r.status == 0);
        const auto csv = slurp(dir / "r.csv");
        CHECK(csv.find("M,row,N_c,N_T,H_ub") != std::string::npos);
        CHECK(csv.find("\n4,total,") != std::string::npos);
        CHECK(csv.find("\n16,total,") != std::string::npos);
        CHECK(csv.find("\n16,2,") != std::string::npos);
    }
}
