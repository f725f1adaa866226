// Golden transcripts for the command-line tool; set QRW_UPDATE_GOLDEN=1 to rewrite them.
#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct Case {
    std::string name;
    std::string args;
};

void PrintTo(const Case& c, std::ostream* os) { *os << c.name; }

std::string trim(std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    return s;
}

std::vector<Case> load_cases() {
    std::ifstream in(fs::path(QRW_SOURCE_DIR) / "tests" / "cli" / "cases.txt");
    std::vector<Case> out;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        auto bar = line.find('|');
        if (bar == std::string::npos) continue;
        out.push_back({trim(line.substr(0, bar)), trim(line.substr(bar + 1))});
    }
    return out;
}

std::string transcript(const Case& c) {
    std::string cmd = "cd '" + std::string(QRW_SOURCE_DIR) + "' && '" + std::string(QRW_CLI_PATH) + "' " + c.args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return "popen failed";
    std::string out = "$ qrw " + c.args + "\n";
    std::array<char, 4096> buf{};
    for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), pipe)) > 0;) out.append(buf.data(), n);
    int status = pclose(pipe);
    out += "[exit " + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + "]\n";
    return out;
}

class CliTranscript : public ::testing::TestWithParam<Case> {};

TEST_P(CliTranscript, MatchesGolden) {
    const Case& c = GetParam();
    fs::path golden = fs::path(QRW_SOURCE_DIR) / "tests" / "cli" / "golden" / (c.name + ".txt");
    std::string got = transcript(c);
    if (std::getenv("QRW_UPDATE_GOLDEN")) {
        std::ofstream(golden, std::ios::binary) << got;
        return;
    }
    std::ifstream in(golden, std::ios::binary);
    ASSERT_TRUE(in) << "missing golden file " << golden;
    std::stringstream want;
    want << in.rdbuf();
    EXPECT_EQ(got, want.str());
}

INSTANTIATE_TEST_SUITE_P(Golden, CliTranscript, ::testing::ValuesIn(load_cases()), [](const auto& info) {
    std::string n = info.param.name;
    for (auto& ch : n)
        if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
    return n;
});

}  // namespace
