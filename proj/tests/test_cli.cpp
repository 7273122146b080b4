// Exercises the installed command-line surface: exit codes and the
// single-JSON-line error contract on stderr.

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "test_util.hpp"

using testutil::TempDir;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string stderr_text;
};

CliResult run_cli(const std::string& args, const std::filesystem::path& scratch) {
    const auto err_file = scratch / "stderr.txt";
    const std::string cmd = std::string("\"") + SHAPESIM_CLI_PATH + "\" " + args +
                            " > /dev/null 2> \"" + err_file.string() + "\"";
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(err_file);
    result.stderr_text.assign((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    return result;
}

// the error contract: exactly one line of JSON with error and message fields
void check_error_line(const CliResult& result, const std::string& category) {
    const auto newline = result.stderr_text.find('\n');
    REQUIRE(newline != std::string::npos);
    CHECK(newline == result.stderr_text.size() - 1);
    const nlohmann::json line = nlohmann::json::parse(result.stderr_text);
    CHECK(line.at("error") == category);
    CHECK(line.contains("message"));
}

}  // namespace

TEST_CASE("inspect returns 0 on a valid manifest and writes no outputs") {
    TempDir dir("cli_inspect");
    REQUIRE(run_cli("synth --spec standard --out \"" + (dir / "scene").string() + "\"",
                    dir.path())
                .exit_code == 0);
    const auto before = std::distance(std::filesystem::recursive_directory_iterator(dir / "scene"),
                                      std::filesystem::recursive_directory_iterator{});
    const CliResult result =
        run_cli("inspect --manifest \"" + (dir / "scene").string() + "/manifest.json\"",
                dir.path());
    CHECK(result.exit_code == 0);
    const auto after = std::distance(std::filesystem::recursive_directory_iterator(dir / "scene"),
                                     std::filesystem::recursive_directory_iterator{});
    CHECK(before == after);
}

TEST_CASE("a missing manifest is a validation failure with a JSON error line") {
    TempDir dir("cli_missing");
    const CliResult result = run_cli("inspect --manifest /nonexistent/manifest.json", dir.path());
    CHECK(result.exit_code == 2);
    check_error_line(result, "missing_asset");
}

TEST_CASE("an unknown strategy flag is rejected before any work") {
    TempDir dir("cli_strategy");
    REQUIRE(run_cli("synth --spec standard --out \"" + (dir / "scene").string() + "\"",
                    dir.path())
                .exit_code == 0);
    const CliResult result = run_cli(
        "simulate --manifest \"" + (dir / "scene").string() +
            "/manifest.json\" --out \"" + (dir / "out").string() + "\" --strategy nonsense",
        dir.path());
    CHECK(result.exit_code == 2);
    check_error_line(result, "schema_error");
    CHECK(!std::filesystem::exists(dir / "out"));
}

TEST_CASE("strategy flags override the manifest") {
    TempDir dir("cli_override");
    REQUIRE(run_cli("synth --spec standard --out \"" + (dir / "scene").string() + "\"",
                    dir.path())
                .exit_code == 0);
    REQUIRE(run_cli("simulate --manifest \"" + (dir / "scene").string() +
                        "/manifest.json\" --out \"" + (dir / "out").string() +
                        "\" --strategy source-depth",
                    dir.path())
                .exit_code == 0);
    std::ifstream in(dir / "out" / "run.json");
    nlohmann::json doc;
    in >> doc;
    CHECK(doc["strategy"] == "source-depth");
}

TEST_CASE("strict mode escalates non-convergence to exit code 4") {
    TempDir dir("cli_strict");
    REQUIRE(run_cli("synth --spec shrunken --out \"" + (dir / "scene").string() + "\"",
                    dir.path())
                .exit_code == 0);
    // cap the solver at one sweep so the fill cannot converge
    {
        std::ifstream in(dir / "scene" / "manifest.json");
        nlohmann::json doc;
        in >> doc;
        doc["refine"] = {{"max_iterations", 1}};
        std::ofstream out(dir / "scene" / "manifest.json");
        out << doc.dump(2);
    }
    const std::string base = "simulate --manifest \"" + (dir / "scene").string() +
                             "/manifest.json\" --out \"" + (dir / "out").string() + "\"";
    CHECK(run_cli(base, dir.path()).exit_code == 0);  // warning only by default
    const CliResult strict = run_cli(base + " --strict", dir.path());
    CHECK(strict.exit_code == 4);
    // outputs are still written: the run finished, only the escalation differs
    CHECK(std::filesystem::exists(dir / "out" / "run.json"));
}

TEST_CASE("bad flags fail with usage errors, help exits zero") {
    TempDir dir("cli_flags");
    CHECK(run_cli("simulate --manifest", dir.path()).exit_code == 2);
    CHECK(run_cli("--help", dir.path()).exit_code == 0);
}
