#include "codesim/corpus.hpp"
#include "codesim/errors.hpp"
#include "codesim/evidence.hpp"
#include "codesim/forest.hpp"
#include "codesim/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace codesim;

namespace {

NormalizationProfile parse_profile(const std::string& name) {
    if (name == "normalized") return NormalizationProfile::Normalized;
    if (name == "text") return NormalizationProfile::Text;
    throw Error("unknown profile '" + name + "' (expected normalized or text)");
}

std::vector<MutationOp> parse_ops(const std::string& list) {
    std::vector<MutationOp> ops;
    std::stringstream stream(list);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item == "rename") {
            ops.push_back(MutationOp::RenameIdentifiers);
        } else if (item == "comments") {
            ops.push_back(MutationOp::InsertComments);
            ops.push_back(MutationOp::DeleteComments);
        } else if (item == "insert-comments") {
            ops.push_back(MutationOp::InsertComments);
        } else if (item == "delete-comments") {
            ops.push_back(MutationOp::DeleteComments);
        } else if (item == "reorder") {
            ops.push_back(MutationOp::ReorderFunctions);
        } else if (item == "literals") {
            ops.push_back(MutationOp::PerturbLiterals);
        } else {
            throw Error("unknown mutation op '" + item +
                        "' (expected rename, comments, reorder, literals)");
        }
    }
    if (ops.empty()) throw Error("mutation op list is empty");
    return ops;
}

std::optional<fs::path> optional_path(const std::string& value) {
    if (value.empty()) return std::nullopt;
    return fs::path(value);
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw Error("failed writing: " + path.string());
}

SourceFile load_single_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    SourceFile file;
    file.id = path.stem().string();
    file.path = path.string();
    file.content = buffer.str();
    if (!utf8::validate(file.content)) throw Error("not valid UTF-8: " + path.string());
    return file;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void print_eval_text(const EvalReport& report, double threshold) {
    std::printf("threshold            %.2f\n", threshold);
    std::printf("examples             %lld (plagiarized %lld, clean %lld)\n",
                static_cast<long long>(report.total()),
                static_cast<long long>(report.tp + report.fn),
                static_cast<long long>(report.tn + report.fp));
    std::printf("tp %-6lld fp %-6lld\n", static_cast<long long>(report.tp),
                static_cast<long long>(report.fp));
    std::printf("fn %-6lld tn %-6lld\n", static_cast<long long>(report.fn),
                static_cast<long long>(report.tn));
    std::printf("tpr (recall)         %.4f\n", report.tpr);
    std::printf("tnr                  %.4f\n", report.tnr);
    std::printf("balanced accuracy    %.4f\n", report.balanced_accuracy);
    std::printf("false positive rate  %.4f\n", report.false_positive_rate);
    std::printf("precision            %.4f\n", report.precision);
}

nlohmann::json eval_to_json(const EvalReport& report, double threshold) {
    auto number_or_null = [](double v) {
        return v == v ? nlohmann::json(v) : nlohmann::json(nullptr);
    };
    return nlohmann::json{
        {"threshold", threshold},
        {"tp", report.tp},
        {"fp", report.fp},
        {"tn", report.tn},
        {"fn", report.fn},
        {"tpr", number_or_null(report.tpr)},
        {"tnr", number_or_null(report.tnr)},
        {"balanced_accuracy", number_or_null(report.balanced_accuracy)},
        {"false_positive_rate", number_or_null(report.false_positive_rate)},
        {"precision", number_or_null(report.precision)},
    };
}

struct TrainArgs {
    std::string submissions;
    std::string template_path;
    std::string labels;
    std::string out;
    int ngram = 3;
    int trees = 100;
    std::uint64_t seed = 42;
    std::string profile = "normalized";
    int max_depth = -1;
    int min_samples_leaf = 1;
    int features_per_split = 2;
    double max_clean_ratio = 10.0;
    int threads = 1;
};

int cmd_train(const TrainArgs& args) {
    const auto loaded = load_corpus(args.submissions, optional_path(args.template_path));
    print_warnings(loaded.warnings);

    PipelineConfig pipeline{{args.ngram}, parse_profile(args.profile)};
    const auto vectors = vectorize_corpus(loaded.corpus, pipeline);
    const auto labels = load_labels(args.labels, loaded.corpus);

    auto examples = features_for_labels(vectors, loaded.corpus, labels);
    const auto total_before = examples.size();
    examples = subsample_clean(examples, args.max_clean_ratio, args.seed);

    std::int64_t plag = 0, clean = 0;
    for (const auto& ex : examples) (ex.label == Label::Plagiarized ? plag : clean) += 1;

    TrainConfig config;
    config.num_trees = args.trees;
    config.max_depth = args.max_depth;
    config.min_samples_leaf = args.min_samples_leaf;
    config.features_per_split = args.features_per_split;
    config.seed = args.seed;
    const auto model = train(examples, config, args.threads);

    const auto training = evaluate(model, examples, 0.5);
    const double accuracy = static_cast<double>(training.tp + training.tn) /
                            static_cast<double>(training.total());

    std::printf("examples             %zu (plagiarized %lld, clean %lld", examples.size(),
                static_cast<long long>(plag), static_cast<long long>(clean));
    if (examples.size() != total_before) {
        std::printf("; subsampled from %zu", total_before);
    }
    std::printf(")\n");
    std::printf("training accuracy    %.4f\n", accuracy);

    save_model_file(model, args.out);
    std::printf("model written to %s\n", args.out.c_str());
    return 0;
}

struct DetectArgs {
    std::string submissions;
    std::string template_path;
    std::string model;
    std::string out;
    double threshold = 0.5;
    std::string evidence_dir;
    int min_match = 8;
    int ngram = 3;
    std::string profile = "normalized";
};

int cmd_detect(const DetectArgs& args) {
    const auto loaded = load_corpus(args.submissions, optional_path(args.template_path));
    print_warnings(loaded.warnings);
    const auto model = load_model_file(args.model);

    PipelineConfig pipeline{{args.ngram}, parse_profile(args.profile)};
    const auto vectors = vectorize_corpus(loaded.corpus, pipeline);
    const auto rows = detect_pairs(loaded.corpus, vectors, model, args.threshold);
    write_text_file(args.out, detection_csv(rows));

    std::size_t flagged = 0;
    for (const auto& row : rows) flagged += row.verdict == Label::Plagiarized ? 1 : 0;
    std::printf("pairs                %zu\n", rows.size());
    std::printf("flagged              %zu\n", flagged);
    std::printf("report written to %s\n", args.out.c_str());

    if (!args.evidence_dir.empty() && flagged > 0) {
        fs::create_directories(args.evidence_dir);
        const auto* template_stream =
            vectors.template_stream ? &*vectors.template_stream : nullptr;
        for (const auto& row : rows) {
            if (row.verdict != Label::Plagiarized) continue;
            const auto ia = vectors.index_of(row.id_a);
            const auto ib = vectors.index_of(row.id_b);
            auto report = build_evidence(vectors.streams[ia], vectors.streams[ib],
                                         template_stream, args.min_match);
            RenderInfo info;
            info.scores = PairFeatures{row.sim_ab, row.sim_at, row.sim_bt};
            info.probability = row.probability;
            const auto html = render_html(report, loaded.corpus.submissions[ia],
                                          loaded.corpus.submissions[ib], info);
            write_text_file(fs::path(args.evidence_dir) / (row.id_a + "__" + row.id_b + ".html"),
                            html);
        }
        std::printf("evidence written to %s (%zu files)\n", args.evidence_dir.c_str(), flagged);
    }
    return 0;
}

struct EvalArgs {
    std::string submissions;
    std::string template_path;
    std::string model;
    std::string labels;
    double threshold = 0.5;
    bool sweep = false;
    double target_fpr = 0.01;
    std::string json_out = "eval.json";
    int ngram = 3;
    std::string profile = "normalized";
};

int cmd_eval(const EvalArgs& args) {
    const auto loaded = load_corpus(args.submissions, optional_path(args.template_path));
    print_warnings(loaded.warnings);
    const auto model = load_model_file(args.model);

    PipelineConfig pipeline{{args.ngram}, parse_profile(args.profile)};
    const auto vectors = vectorize_corpus(loaded.corpus, pipeline);
    const auto labels = load_labels(args.labels, loaded.corpus);
    const auto examples = features_for_labels(vectors, loaded.corpus, labels);

    bool has_plag = false, has_clean = false;
    for (const auto& ex : examples) {
        (ex.label == Label::Plagiarized ? has_plag : has_clean) = true;
    }
    if (!has_plag || !has_clean) {
        throw SingleClassData("labels contain a single class; balanced accuracy is undefined");
    }

    double threshold = args.threshold;
    if (args.sweep) {
        const auto sweep = sweep_thresholds(model, examples, args.target_fpr);
        std::printf("threshold      tp      fp      tn      fn     tpr     fpr  balanced\n");
        for (const auto& row : sweep.rows) {
            std::printf("%9.2f %7lld %7lld %7lld %7lld  %6.4f  %6.4f    %6.4f\n", row.threshold,
                        static_cast<long long>(row.report.tp),
                        static_cast<long long>(row.report.fp),
                        static_cast<long long>(row.report.tn),
                        static_cast<long long>(row.report.fn), row.report.tpr,
                        row.report.false_positive_rate, row.report.balanced_accuracy);
        }
        threshold = sweep.selected;
        if (sweep.target_met) {
            std::printf("selected threshold %.2f (highest recall with fpr <= %g)\n", threshold,
                        args.target_fpr);
        } else {
            std::printf("no threshold meets fpr <= %g; using %.2f (lowest fpr)\n",
                        args.target_fpr, threshold);
        }
        std::printf("\n");
    }

    const auto report = evaluate(model, examples, threshold);
    print_eval_text(report, threshold);
    write_text_file(args.json_out, eval_to_json(report, threshold).dump(2) + "\n");
    std::printf("json written to %s\n", args.json_out.c_str());
    return 0;
}

struct EvidenceArgs {
    std::string a;
    std::string b;
    std::string template_path;
    int min_match = 8;
    double overlap_fraction = 0.8;
    std::string out;
    std::string profile = "normalized";
};

int cmd_evidence(const EvidenceArgs& args) {
    const auto file_a = load_single_file(args.a);
    const auto file_b = load_single_file(args.b);
    const auto profile = parse_profile(args.profile);

    const auto stream_a = normalize_source(file_a, profile);
    const auto stream_b = normalize_source(file_b, profile);

    std::optional<NormalizedStream> template_stream;
    if (!args.template_path.empty()) {
        template_stream = normalize_source(load_single_file(args.template_path), profile);
    }

    const auto report =
        build_evidence(stream_a, stream_b, template_stream ? &*template_stream : nullptr,
                       args.min_match, args.overlap_fraction);
    write_text_file(args.out, render_html(report, file_a, file_b));

    std::size_t template_tiles = 0;
    for (const auto& tile : report.tiles) template_tiles += tile.template_derived ? 1 : 0;
    std::printf("tiles %zu (template %zu)\n", report.tiles.size(), template_tiles);
    std::printf("coverage_a %s\n", format_double(report.coverage_a).c_str());
    std::printf("coverage_b %s\n", format_double(report.coverage_b).c_str());
    std::printf("evidence written to %s\n", args.out.c_str());
    return 0;
}

struct SynthArgs {
    std::string out;
    int originals = 60;
    int copies = 40;
    std::string ops = "rename,comments,reorder,literals";
    int mutations_per_copy = 3;
    std::uint64_t seed = 7;
};

int cmd_synth(const SynthArgs& args) {
    SyntheticConfig config;
    config.num_originals = args.originals;
    config.num_plagiarized = args.copies;
    config.mutation_ops = parse_ops(args.ops);
    config.mutations_per_copy = args.mutations_per_copy;
    config.seed = args.seed;

    const auto generated = generate_synthetic(config);
    write_corpus(generated.corpus, generated.labels, args.out);
    std::printf("wrote %zu files + labels.csv to %s\n", generated.corpus.submissions.size(),
                args.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"codesim: source-code plagiarism detection with visual evidence"};
    app.require_subcommand(1);

    std::function<int()> action;

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train a random-forest model from labeled pairs");
    train_cmd->add_option("--submissions", train_args.submissions, "Directory of .pde/.java files")
        ->required();
    train_cmd->add_option("--template", train_args.template_path, "Instructor template file");
    train_cmd->add_option("--labels", train_args.labels, "Labels CSV (id_a,id_b,label)")
        ->required();
    train_cmd->add_option("--out", train_args.out, "Output model file (JSON)")->required();
    train_cmd->add_option("--ngram", train_args.ngram, "n-gram length (1-10)")
        ->default_val(3)
        ->check(CLI::Range(1, 10));
    train_cmd->add_option("--trees", train_args.trees, "Number of trees")
        ->default_val(100)
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--seed", train_args.seed, "Training seed")->default_val(42);
    train_cmd->add_option("--profile", train_args.profile, "normalized|text")
        ->default_val("normalized");
    train_cmd->add_option("--max-depth", train_args.max_depth, "Max tree depth, -1 = unlimited")
        ->default_val(-1);
    train_cmd->add_option("--min-samples-leaf", train_args.min_samples_leaf, "Min samples per leaf")
        ->default_val(1)
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--features-per-split", train_args.features_per_split,
                          "Features sampled per split (1-3)")
        ->default_val(2)
        ->check(CLI::Range(1, 3));
    train_cmd->add_option("--max-clean-ratio", train_args.max_clean_ratio,
                          "Cap clean examples at ratio x plagiarized (0 = keep all)")
        ->default_val(10.0);
    train_cmd->add_option("--threads", train_args.threads, "Tree-building threads")
        ->default_val(1)
        ->check(CLI::PositiveNumber);
    train_cmd->callback([&] { action = [&] { return cmd_train(train_args); }; });

    DetectArgs detect_args;
    auto* detect_cmd = app.add_subcommand("detect", "Score every pair in a submissions directory");
    detect_cmd->add_option("--submissions", detect_args.submissions, "Directory of .pde/.java files")
        ->required();
    detect_cmd->add_option("--template", detect_args.template_path, "Instructor template file");
    detect_cmd->add_option("--model", detect_args.model, "Trained model file")->required();
    detect_cmd->add_option("--out", detect_args.out, "Output report CSV")->required();
    detect_cmd->add_option("--threshold", detect_args.threshold, "Probability threshold")
        ->default_val(0.5);
    detect_cmd->add_option("--evidence-dir", detect_args.evidence_dir,
                           "Write an HTML evidence file per flagged pair");
    detect_cmd->add_option("--min-match", detect_args.min_match, "Minimum tile length (symbols)")
        ->default_val(8)
        ->check(CLI::PositiveNumber);
    detect_cmd->add_option("--ngram", detect_args.ngram, "n-gram length (match training)")
        ->default_val(3)
        ->check(CLI::Range(1, 10));
    detect_cmd->add_option("--profile", detect_args.profile, "normalized|text (match training)")
        ->default_val("normalized");
    detect_cmd->callback([&] { action = [&] { return cmd_detect(detect_args); }; });

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model against labeled pairs");
    eval_cmd->add_option("--submissions", eval_args.submissions, "Directory of .pde/.java files")
        ->required();
    eval_cmd->add_option("--template", eval_args.template_path, "Instructor template file");
    eval_cmd->add_option("--model", eval_args.model, "Trained model file")->required();
    eval_cmd->add_option("--labels", eval_args.labels, "Labels CSV")->required();
    auto* threshold_opt =
        eval_cmd->add_option("--threshold", eval_args.threshold, "Probability threshold")
            ->default_val(0.5);
    eval_cmd->add_flag("--sweep", eval_args.sweep, "Sweep thresholds 0.00-1.00")
        ->excludes(threshold_opt);
    eval_cmd->add_option("--target-fpr", eval_args.target_fpr, "FPR target for --sweep")
        ->default_val(0.01)
        ->check(CLI::Range(0.0, 1.0));
    eval_cmd->add_option("--json-out", eval_args.json_out, "Machine-readable output path")
        ->default_val("eval.json");
    eval_cmd->add_option("--ngram", eval_args.ngram, "n-gram length (match training)")
        ->default_val(3)
        ->check(CLI::Range(1, 10));
    eval_cmd->add_option("--profile", eval_args.profile, "normalized|text (match training)")
        ->default_val("normalized");
    eval_cmd->callback([&] { action = [&] { return cmd_eval(eval_args); }; });

    EvidenceArgs evidence_args;
    auto* evidence_cmd =
        app.add_subcommand("evidence", "Render a side-by-side HTML report for one pair");
    evidence_cmd->add_option("--a", evidence_args.a, "First file")->required();
    evidence_cmd->add_option("--b", evidence_args.b, "Second file")->required();
    evidence_cmd->add_option("--template", evidence_args.template_path, "Instructor template file");
    evidence_cmd->add_option("--min-match", evidence_args.min_match,
                             "Minimum tile length (symbols)")
        ->default_val(8)
        ->check(CLI::PositiveNumber);
    evidence_cmd->add_option("--overlap-fraction", evidence_args.overlap_fraction,
                             "Template containment needed to mute a tile")
        ->default_val(0.8)
        ->check(CLI::Range(1e-9, 1.0));
    evidence_cmd->add_option("--out", evidence_args.out, "Output HTML file")->required();
    evidence_cmd->add_option("--profile", evidence_args.profile, "normalized|text")
        ->default_val("normalized");
    evidence_cmd->callback([&] { action = [&] { return cmd_evidence(evidence_args); }; });

    SynthArgs synth_args;
    auto* synth_cmd =
        app.add_subcommand("synth", "Generate a seeded synthetic corpus with labels");
    synth_cmd->add_option("--out", synth_args.out, "Output directory")->required();
    synth_cmd->add_option("--originals", synth_args.originals, "Number of original sketches")
        ->default_val(60)
        ->check(CLI::Range(2, 1000000));
    synth_cmd->add_option("--copies", synth_args.copies, "Number of plagiarized copies")
        ->default_val(40)
        ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--ops", synth_args.ops,
                          "Comma list of rename,comments,reorder,literals")
        ->default_val("rename,comments,reorder,literals");
    synth_cmd->add_option("--mutations-per-copy", synth_args.mutations_per_copy,
                          "Mutation draws per copy")
        ->default_val(3)
        ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--seed", synth_args.seed, "Generator seed")->default_val(7);
    synth_cmd->callback([&] { action = [&] { return cmd_synth(synth_args); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return action ? action() : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
