// End-to-end tests that drive the real binary through its public surface:
// flags, files, exit codes, output formats.

#include <doctest.h>

#include "../support/html_checker.hpp"
#include "../support/subprocess.hpp"
#include "../support/temp_dir.hpp"

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

using testsupport::RunResult;
using testsupport::TempDir;

namespace {

const std::string kCli = CODESIM_CLI_PATH;

RunResult cli(const std::string& args) { return testsupport::run_command(kCli + " " + args); }

std::string q(const std::filesystem::path& path) { return "'" + path.string() + "'"; }

// A small deterministic corpus shared by several cases.
struct Fixture {
    TempDir dir;
    std::filesystem::path corpus_dir;
    std::filesystem::path labels;
    std::filesystem::path model;

    Fixture() {
        corpus_dir = dir.path() / "corpus";
        const auto synth = cli("synth --out " + q(corpus_dir) + " --originals 10 --copies 6 --seed 21");
        REQUIRE(synth.exit_code == 0);
        labels = corpus_dir / "labels.csv";
        model = dir.path() / "model.json";
        const auto train = cli("train --submissions " + q(corpus_dir) + " --labels " + q(labels) +
                               " --out " + q(model) + " --trees 30 --seed 5");
        REQUIRE(train.exit_code == 0);
    }
};

std::size_t count_lines(const std::string& text) {
    std::size_t count = 0;
    for (char c : text) count += c == '\n' ? 1 : 0;
    return count;
}

}  // namespace

TEST_CASE("synth: defaults write 100 files plus labels") {
    TempDir dir;
    const auto out = dir.path() / "corpus";
    const auto result = cli("synth --out " + q(out));
    CHECK(result.exit_code == 0);

    std::size_t pde_files = 0;
    bool has_labels = false;
    for (const auto& entry : std::filesystem::directory_iterator(out)) {
        if (entry.path().extension() == ".pde") ++pde_files;
        if (entry.path().filename() == "labels.csv") has_labels = true;
    }
    CHECK(pde_files == 100);
    CHECK(has_labels);
}

TEST_CASE("synth: same seed twice gives byte-identical trees") {
    TempDir dir;
    const auto out1 = dir.path() / "one";
    const auto out2 = dir.path() / "two";
    CHECK(cli("synth --out " + q(out1) + " --originals 8 --copies 5 --seed 77").exit_code == 0);
    CHECK(cli("synth --out " + q(out2) + " --originals 8 --copies 5 --seed 77").exit_code == 0);

    const auto diff =
        testsupport::run_command("diff -r " + q(out1) + " " + q(out2));
    CHECK(diff.exit_code == 0);
}

TEST_CASE("synth: zero copies means labels hold only clean rows") {
    TempDir dir;
    const auto out = dir.path() / "corpus";
    REQUIRE(cli("synth --out " + q(out) + " --originals 5 --copies 0 --seed 3").exit_code == 0);
    const auto labels = testsupport::read_file(out / "labels.csv");
    CHECK(labels.find("plagiarized") == std::string::npos);
    CHECK(labels.find("clean") != std::string::npos);
}

TEST_CASE("train: happy path writes a model and prints a summary") {
    Fixture fx;
    CHECK(std::filesystem::exists(fx.model));
    const auto content = testsupport::read_file(fx.model);
    CHECK(content.find("\"format_version\"") != std::string::npos);
}

TEST_CASE("train: unknown label id exits 2 and names the id") {
    Fixture fx;
    TempDir dir;
    dir.write("bad.csv", "id_a,id_b,label\norig0000,ghost,plagiarized\n");
    const auto result = cli("train --submissions " + q(fx.corpus_dir) + " --labels " +
                            q(dir.file("bad.csv")) + " --out " + q(dir.file("m.json")));
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("ghost") != std::string::npos);
}

TEST_CASE("train: single-class labels exit 2 with the contract message") {
    Fixture fx;
    TempDir dir;
    dir.write("single.csv", "id_a,id_b,label\norig0000,orig0001,clean\norig0000,orig0002,clean\n");
    const auto result = cli("train --submissions " + q(fx.corpus_dir) + " --labels " +
                            q(dir.file("single.csv")) + " --out " + q(dir.file("m.json")));
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("labels contain a single class") != std::string::npos);
}

TEST_CASE("detect: report format, ranking, evidence files") {
    Fixture fx;
    TempDir out;
    const auto report = out.file("report.csv");
    const auto evidence_dir = out.path() / "evidence";
    const auto result = cli("detect --submissions " + q(fx.corpus_dir) + " --model " +
                            q(fx.model) + " --out " + q(report) + " --evidence-dir " +
                            q(evidence_dir));
    CHECK(result.exit_code == 0);

    const auto csv = testsupport::read_file(report);
    REQUIRE(csv.starts_with("id_a,id_b,sim_ab,sim_at,sim_bt,probability,verdict\n"));
    // 16 files -> C(16,2) pairs + header
    CHECK(count_lines(csv) == 121);

    // flagged rows match the number of evidence documents
    std::size_t flagged = testsupport::count_occurrences(csv, ",plagiarized\n");
    std::size_t html_files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(evidence_dir)) {
        if (entry.path().extension() == ".html") ++html_files;
    }
    CHECK(flagged > 0);
    CHECK(html_files == flagged);

    // every evidence document passes the strict checker
    for (const auto& entry : std::filesystem::directory_iterator(evidence_dir)) {
        const auto html = testsupport::read_file(entry.path());
        const auto check = testsupport::check_html(html);
        CHECK_MESSAGE(check.ok, entry.path().string() << ": " << check.error);
    }
}

TEST_CASE("train and detect accept an instructor template") {
    Fixture fx;
    TempDir dir;
    // use one of the originals as a stand-in template: every file then has
    // realistic nonzero template similarity
    const auto template_path = fx.corpus_dir / "orig0000.pde";
    const auto model = dir.file("model_t.json");
    const auto train = cli("train --submissions " + q(fx.corpus_dir) + " --template " +
                           q(template_path) + " --labels " + q(fx.labels) + " --out " +
                           q(model) + " --trees 20 --seed 5");
    REQUIRE(train.exit_code == 0);

    const auto report = dir.file("report_t.csv");
    const auto detect = cli("detect --submissions " + q(fx.corpus_dir) + " --template " +
                            q(template_path) + " --model " + q(model) + " --out " + q(report));
    REQUIRE(detect.exit_code == 0);

    // rows involving orig0000 itself must report sim_at or sim_bt of 1
    const auto csv = testsupport::read_file(report);
    bool found_full_template_match = false;
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        if (line.find("orig0000") == std::string::npos) continue;
        std::vector<std::string> fields;
        std::stringstream fs(line);
        std::string field;
        while (std::getline(fs, field, ',')) fields.push_back(field);
        REQUIRE(fields.size() == 7);
        const double sim_at = std::stod(fields[3]);
        const double sim_bt = std::stod(fields[4]);
        if (sim_at > 1.0 - 1e-9 || sim_bt > 1.0 - 1e-9) found_full_template_match = true;
    }
    CHECK(found_full_template_match);
}

TEST_CASE("detect: zero flagged pairs still exits 0") {
    Fixture fx;
    TempDir out;
    const auto report = out.file("report.csv");
    // nothing can reach probability 1.01
    const auto result = cli("detect --submissions " + q(fx.corpus_dir) + " --model " +
                            q(fx.model) + " --out " + q(report) + " --threshold 1.01");
    CHECK(result.exit_code == 0);
    const auto csv = testsupport::read_file(report);
    CHECK(testsupport::count_occurrences(csv, ",plagiarized\n") == 0);
}

TEST_CASE("eval: --sweep and --threshold are mutually exclusive") {
    Fixture fx;
    const auto result = cli("eval --submissions " + q(fx.corpus_dir) + " --model " +
                            q(fx.model) + " --labels " + q(fx.labels) +
                            " --sweep --threshold 0.4");
    CHECK(result.exit_code == 2);
}

TEST_CASE("detect: single-file corpus exits 2") {
    TempDir dir;
    const auto corpus = dir.path() / "corpus";
    std::filesystem::create_directories(corpus);
    {
        std::ofstream out(corpus / "only.pde");
        out << "int x;\n";
    }
    TempDir model_dir;
    Fixture fx;
    const auto result = cli("detect --submissions " + q(corpus) + " --model " + q(fx.model) +
                            " --out " + q(dir.file("r.csv")));
    CHECK(result.exit_code == 2);
}

TEST_CASE("detect: corrupt model exits 2") {
    Fixture fx;
    TempDir dir;
    dir.write("bad_model.json", "{\"format_version\": 42}");
    const auto result = cli("detect --submissions " + q(fx.corpus_dir) + " --model " +
                            q(dir.file("bad_model.json")) + " --out " + q(dir.file("r.csv")));
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("42") != std::string::npos);
}

TEST_CASE("end-to-end determinism: train + detect twice, byte-identical outputs") {
    Fixture fx;
    TempDir dir;
    const auto model2 = dir.file("model2.json");
    const auto train2 = cli("train --submissions " + q(fx.corpus_dir) + " --labels " +
                            q(fx.labels) + " --out " + q(model2) + " --trees 30 --seed 5");
    REQUIRE(train2.exit_code == 0);
    CHECK(testsupport::read_file(fx.model) == testsupport::read_file(model2));

    const auto r1 = dir.file("r1.csv");
    const auto r2 = dir.file("r2.csv");
    REQUIRE(cli("detect --submissions " + q(fx.corpus_dir) + " --model " + q(fx.model) +
                " --out " + q(r1))
                .exit_code == 0);
    REQUIRE(cli("detect --submissions " + q(fx.corpus_dir) + " --model " + q(model2) +
                " --out " + q(r2))
                .exit_code == 0);
    CHECK(testsupport::read_file(r1) == testsupport::read_file(r2));
}

TEST_CASE("eval: json metrics and sweep table") {
    Fixture fx;
    TempDir dir;
    const auto json_out = dir.file("eval.json");

    SUBCASE("fixed threshold") {
        const auto result = cli("eval --submissions " + q(fx.corpus_dir) + " --model " +
                                q(fx.model) + " --labels " + q(fx.labels) + " --json-out " +
                                q(json_out));
        CHECK(result.exit_code == 0);
        const auto json = testsupport::read_file(json_out);
        CHECK(json.find("\"balanced_accuracy\"") != std::string::npos);
        CHECK(json.find("\"false_positive_rate\"") != std::string::npos);
        CHECK(result.out.find("balanced accuracy") != std::string::npos);
    }

    SUBCASE("sweep prints 101 threshold rows") {
        const auto result = cli("eval --submissions " + q(fx.corpus_dir) + " --model " +
                                q(fx.model) + " --labels " + q(fx.labels) +
                                " --sweep --target-fpr 0.01 --json-out " + q(json_out));
        CHECK(result.exit_code == 0);
        std::size_t sweep_rows = 0;
        std::size_t pos = 0;
        // count lines starting with a threshold column (two decimals)
        for (double t = 0.0; t <= 100.0; t += 1.0) {
            char needle[16];
            std::snprintf(needle, sizeof(needle), "     %4.2f ", t / 100.0);
            if (result.out.find(needle, pos) != std::string::npos) ++sweep_rows;
        }
        CHECK(sweep_rows == 101);
        CHECK(result.out.find("selected threshold") != std::string::npos);
    }

    SUBCASE("all-clean labels exit 2") {
        TempDir labels_dir;
        labels_dir.write("clean.csv",
                         "id_a,id_b,label\norig0000,orig0001,clean\norig0001,orig0002,clean\n");
        const auto result = cli("eval --submissions " + q(fx.corpus_dir) + " --model " +
                                q(fx.model) + " --labels " + q(labels_dir.file("clean.csv")) +
                                " --json-out " + q(json_out));
        CHECK(result.exit_code == 2);
    }
}

TEST_CASE("evidence: identical files, disjoint files, template muting") {
    TempDir dir;
    const std::string sketch =
        "void setup() {\n  size(300, 300);\n}\n\nvoid draw() {\n  rect(10, 20, 30, 40);\n"
        "  ellipse(1, 2, 3, 4);\n  line(5, 6, 7, 8);\n}\n";
    dir.write("a.pde", sketch);
    dir.write("b.pde", sketch);
    dir.write("c.pde", "int unrelated = 1;\n");

    SUBCASE("identical files reach full coverage") {
        const auto out = dir.file("ab.html");
        const auto result =
            cli("evidence --a " + q(dir.file("a.pde")) + " --b " + q(dir.file("b.pde")) +
                " --out " + q(out));
        CHECK(result.exit_code == 0);
        CHECK(result.out.find("coverage_a 1\n") != std::string::npos);
        CHECK(result.out.find("coverage_b 1\n") != std::string::npos);
        const auto html = testsupport::read_file(out);
        const auto check = testsupport::check_html(html);
        CHECK_MESSAGE(check.ok, check.error);
    }

    SUBCASE("no shared run still writes a valid document") {
        const auto out = dir.file("ac.html");
        const auto result =
            cli("evidence --a " + q(dir.file("a.pde")) + " --b " + q(dir.file("c.pde")) +
                " --out " + q(out));
        CHECK(result.exit_code == 0);
        CHECK(result.out.find("tiles 0") != std::string::npos);
        const auto check = testsupport::check_html(testsupport::read_file(out));
        CHECK_MESSAGE(check.ok, check.error);
    }

    SUBCASE("template equal to both files mutes every tile") {
        const auto out = dir.file("tpl.html");
        const auto result =
            cli("evidence --a " + q(dir.file("a.pde")) + " --b " + q(dir.file("b.pde")) +
                " --template " + q(dir.file("a.pde")) + " --out " + q(out));
        CHECK(result.exit_code == 0);
        CHECK(result.out.find("tiles 1 (template 1)") != std::string::npos);
    }

    SUBCASE("missing input exits 2") {
        const auto result = cli("evidence --a " + q(dir.file("missing.pde")) + " --b " +
                                q(dir.file("b.pde")) + " --out " + q(dir.file("x.html")));
        CHECK(result.exit_code == 2);
    }
}

TEST_CASE("cli: unknown flags and missing subcommand exit 2") {
    CHECK(cli("detect --nonsense").exit_code == 2);
    CHECK(cli("").exit_code == 2);
    CHECK(cli("--help").exit_code == 0);
}

TEST_CASE("cli: out-of-range numeric flags exit 2") {
    Fixture fx;
    TempDir dir;
    CHECK(cli("train --submissions " + q(fx.corpus_dir) + " --labels " + q(fx.labels) +
              " --out " + q(dir.file("m.json")) + " --ngram 11")
              .exit_code == 2);
    CHECK(cli("train --submissions " + q(fx.corpus_dir) + " --labels " + q(fx.labels) +
              " --out " + q(dir.file("m.json")) + " --trees 0")
              .exit_code == 2);
    CHECK(cli("synth --out " + q(dir.path() / "s") + " --originals 1").exit_code == 2);
}
