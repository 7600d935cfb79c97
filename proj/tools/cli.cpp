#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>

#include "mvr/analysis.hpp"
#include "mvr/bench/annotation_io.hpp"
#include "mvr/bench/stats.hpp"
#include "mvr/binary_io.hpp"
#include "mvr/error.hpp"
#include "mvr/evaluation.hpp"
#include "mvr/gallery.hpp"
#include "mvr/query_set.hpp"
#include "mvr/semb.hpp"
#include "mvr/train/adapter_io.hpp"
#include "mvr/train/train_data.hpp"
#include "mvr/train/trainer.hpp"

namespace mvr::cli {
namespace {

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        parts.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return parts;
}

std::vector<SourceKind> parse_kinds(const std::string& text) {
    std::vector<SourceKind> kinds;
    for (const auto& part : split_commas(text)) {
        auto kind = parse_source_kind(part);
        if (!kind) {
            fail(ErrorCode::InvalidArgument, fmt::format("unknown source kind '{}'", part));
        }
        kinds.push_back(*kind);
    }
    return kinds;
}

std::vector<double> parse_edges(const std::string& text) {
    std::vector<double> edges;
    for (const auto& part : split_commas(text)) {
        try {
            std::size_t used = 0;
            edges.push_back(std::stod(part, &used));
            if (used != part.size()) {
                throw std::invalid_argument(part);
            }
        } catch (const std::exception&) {
            fail(ErrorCode::InvalidArgument, fmt::format("bad histogram edge '{}'", part));
        }
    }
    return edges;
}

// Writes to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, std::string_view text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_text_file(path, text);
    }
}

std::string utc_timestamp() {
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                   std::chrono::system_clock::now())));
}

struct EvalOptions {
    std::string gallery;
    std::string queries;
    std::string ks = "1,5,10";
    std::string tier_field = "tier";
    std::string report;
    std::string table;
    std::string sources;
    std::string method = "multi-embedding";
    std::size_t threads = 1;
    bool deterministic = false;
};

int cmd_eval(const EvalOptions& o, std::ostream& out) {
    const auto ks = parse_ks(o.ks);
    std::optional<std::vector<SourceKind>> kinds;
    if (!o.sources.empty()) {
        kinds = parse_kinds(o.sources);
    }
    GalleryIndex gallery = load_gallery(o.gallery);
    if (kinds) {
        gallery = select_sources(gallery, *kinds);
    }
    const auto queries = load_queries(o.queries, o.tier_field);
    const EvalReport report = evaluate(queries, gallery, ks, SearchOptions{o.threads});

    std::optional<std::string> stamp;
    if (!o.deterministic) {
        stamp = utc_timestamp();
    }
    if (!o.report.empty()) {
        write_text_file(o.report, report_to_json(report, stamp));
    }
    const std::string table = report_to_table(report, o.method);
    if (!o.table.empty()) {
        write_text_file(o.table, table);
    }
    out << table;
    return kExitOk;
}

struct BuildIndexOptions {
    std::string input;
    std::string output;
    bool normalize = false;
};

int cmd_build_index(const BuildIndexOptions& o, std::ostream& out) {
    GalleryIndex gallery = load_gallery(o.input);
    if (o.normalize) {
        gallery = normalize_gallery(gallery);
    }
    save_gallery(gallery, o.output);
    out << fmt::format("wrote {} items (dim {}, normalized={}) to {}\n", gallery.size(), gallery.dim(),
                       gallery.normalized() ? "yes" : "no", o.output);
    return kExitOk;
}

struct TrainOptions {
    std::string dataset;
    std::string checkpoint;
    std::string loss_curve;
    std::string encoding = "inline";
    std::string region_policy = "random";
    train::TrainConfig config;
    std::size_t threads = 1;
};

int cmd_train(const TrainOptions& o, std::ostream& out) {
    train::validate(o.config);
    const auto encoding = train::parse_vector_encoding(o.encoding);
    if (!encoding) {
        fail(ErrorCode::ConfigInvalid, fmt::format("unknown vector encoding '{}'", o.encoding));
    }
    train::TrainConfig config = o.config;
    if (o.region_policy == "summary") {
        config.policy = train::RegionPolicy::Summary;
    } else if (o.region_policy != "random") {
        fail(ErrorCode::ConfigInvalid, fmt::format("unknown region policy '{}'", o.region_policy));
    }
    const auto samples = train::load_train_samples(o.dataset, *encoding);
    const auto result = train::train_adapter(samples, config);

    train::save_adapter(result.params, o.checkpoint);
    std::string csv = "epoch,loss\n";
    for (std::size_t e = 0; e < result.loss_curve.size(); ++e) {
        csv += fmt::format("{},{:.17g}\n", e, result.loss_curve[e]);
    }
    write_text_file(o.loss_curve.empty() ? o.checkpoint + ".loss.csv" : o.loss_curve, csv);
    out << fmt::format("trained {} epochs on {} samples: loss {:.6g} -> {:.6g}\n", config.epochs,
                       samples.size(), result.loss_curve.front(), result.loss_curve.back());
    return kExitOk;
}

struct AnnotationOptions {
    std::string annotations;
    std::string output;
    std::string csv;
    std::string caption_edges;
    std::string bbox_edges;
    std::string mask_edges;
};

int cmd_tier(const AnnotationOptions& o, std::ostream& out) {
    const auto samples = bench::load_annotations(o.annotations);
    std::vector<bench::TierSet> tiers;
    tiers.reserve(samples.size());
    for (const auto& s : samples) {
        tiers.push_back(bench::build_tiers(s));
    }
    emit(o.output, bench::format_tiers(tiers), out);
    return kExitOk;
}

int cmd_filter(const AnnotationOptions& o, std::ostream& out) {
    const auto samples = bench::load_annotations(o.annotations);
    std::vector<bench::FilterVerdict> verdicts;
    verdicts.reserve(samples.size());
    for (const auto& s : samples) {
        verdicts.push_back(bench::auto_filter(s));
    }
    emit(o.output, bench::format_verdicts(samples, verdicts), out);
    return kExitOk;
}

int cmd_stats(const AnnotationOptions& o, std::ostream& out) {
    bench::StatsConfig config = bench::StatsConfig::defaults();
    if (!o.caption_edges.empty()) {
        config.caption_length_edges = parse_edges(o.caption_edges);
    }
    if (!o.bbox_edges.empty()) {
        config.bbox_ratio_edges = parse_edges(o.bbox_edges);
    }
    if (!o.mask_edges.empty()) {
        config.mask_count_edges = parse_edges(o.mask_edges);
    }
    const auto samples = bench::load_annotations(o.annotations);
    const auto report = bench::dataset_stats(samples, config);
    emit(o.output, bench::stats_to_json(report), out);
    if (!o.csv.empty()) {
        write_text_file(o.csv, bench::stats_histograms_csv(report));
    }
    return kExitOk;
}

struct GalleryToolOptions {
    std::string gallery;
    std::string item;
    std::string rows = "regional_prompt";
    std::string cols = "crop";
    std::string output;
    std::size_t sample = 0;
    std::uint64_t seed = 0;
};

const ItemEmbeddingSet& find_item(const GalleryIndex& gallery, const std::string& id) {
    const ItemEmbeddingSet* item = gallery.find(id);
    if (item == nullptr) {
        fail(ErrorCode::InvalidArgument, fmt::format("item '{}' not in gallery", id));
    }
    return *item;
}

int cmd_simmat(const GalleryToolOptions& o, std::ostream& out) {
    const auto row_kinds = parse_kinds(o.rows);
    const auto col_kinds = parse_kinds(o.cols);
    const GalleryIndex gallery = load_gallery(o.gallery);
    const ItemEmbeddingSet& item = find_item(gallery, o.item);
    std::vector<analysis::LabeledVector> rows;
    std::vector<analysis::LabeledVector> cols;
    for (auto kind : row_kinds) {
        auto v = analysis::embeddings_of_kind(item, kind);
        rows.insert(rows.end(), v.begin(), v.end());
    }
    for (auto kind : col_kinds) {
        auto v = analysis::embeddings_of_kind(item, kind);
        cols.insert(cols.end(), v.begin(), v.end());
    }
    emit(o.output, analysis::sim_matrix_csv(analysis::similarity_matrix(rows, cols)), out);
    return kExitOk;
}

int cmd_proximity(const GalleryToolOptions& o, std::ostream& out) {
    const GalleryIndex gallery = load_gallery(o.gallery);
    const ItemEmbeddingSet& item = find_item(gallery, o.item);
    emit(o.output, analysis::proximity_to_json(item.item_id, analysis::global_proximity_report(item)), out);
    return kExitOk;
}

int cmd_export_projection(const GalleryToolOptions& o, std::ostream& out) {
    const GalleryIndex gallery = load_gallery(o.gallery);
    std::vector<ItemEmbeddingSet> items = gallery.items();
    if (o.sample > 0 && o.sample < items.size()) {
        std::vector<std::size_t> order(items.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        train::Rng rng(o.seed);
        train::shuffle_indices(order, rng);
        order.resize(o.sample);
        std::sort(order.begin(), order.end());
        std::vector<ItemEmbeddingSet> picked;
        for (auto i : order) {
            picked.push_back(items[i]);
        }
        items = std::move(picked);
    }
    emit(o.output, analysis::projection_csv(items, gallery.normalized()), out);
    return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-embedding text-to-image retrieval, evaluation, adapter training and "
                 "benchmark construction tools.",
                 "mvr"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");
    std::function<int()> action;

    BuildIndexOptions build;
    auto* build_cmd = app.add_subcommand("build-index", "Validate a SEMB gallery and write it back out");
    build_cmd->add_option("input", build.input, "Input SEMB file")->required();
    build_cmd->add_option("output", build.output, "Output SEMB file")->required();
    build_cmd->add_flag("--normalize", build.normalize, "Unit-normalize every embedding");
    build_cmd->callback([&] { action = [&] { return cmd_build_index(build, out); }; });

    EvalOptions eval;
    auto* eval_cmd = app.add_subcommand("eval", "Text-to-image Recall@K over a gallery");
    eval_cmd->add_option("gallery", eval.gallery, "SEMB gallery")->required();
    eval_cmd->add_option("queries", eval.queries, "Query JSON-Lines")->required();
    eval_cmd->add_option("--k", eval.ks, "Comma-separated cutoffs")->capture_default_str();
    eval_cmd->add_option("--tier-field", eval.tier_field, "Query field used to group results")
        ->capture_default_str();
    eval_cmd->add_option("--report", eval.report, "Write the JSON report here");
    eval_cmd->add_option("--table", eval.table, "Also write the text table here");
    eval_cmd->add_option("--sources", eval.sources,
                         "Only score these source kinds (e.g. global or regional_prompt,global)");
    eval_cmd->add_option("--method", eval.method, "Row label in the text table")->capture_default_str();
    eval_cmd->add_option("--threads", eval.threads, "Worker threads, 0 = all cores")->capture_default_str();
    eval_cmd->add_flag("--deterministic", eval.deterministic, "Omit the generated_at timestamp");
    eval_cmd->callback([&] { action = [&] { return cmd_eval(eval, out); }; });

    TrainOptions tr;
    auto* train_cmd = app.add_subcommand("train", "Fit the linear image-side adapter");
    train_cmd->add_option("dataset", tr.dataset, "Training JSON-Lines")->required();
    train_cmd->add_option("--checkpoint", tr.checkpoint, "SADP checkpoint output")->required();
    train_cmd->add_option("--loss-curve", tr.loss_curve, "Loss curve CSV (default: <checkpoint>.loss.csv)");
    train_cmd->add_option("--tau", tr.config.tau, "Temperature")->capture_default_str();
    train_cmd->add_option("--lr", tr.config.lr, "Learning rate")->capture_default_str();
    train_cmd->add_option("--momentum", tr.config.momentum, "Heavy-ball momentum")->capture_default_str();
    train_cmd->add_option("--epochs", tr.config.epochs, "Epochs")->capture_default_str();
    train_cmd->add_option("--batch-size", tr.config.batch_size, "Batch size")->capture_default_str();
    train_cmd->add_option("--seed", tr.config.seed, "Seed for all randomness")->capture_default_str();
    train_cmd->add_option("--vector-encoding", tr.encoding, "inline or base64")->capture_default_str();
    train_cmd->add_option("--region-policy", tr.region_policy,
                          "random (one region per image per step) or summary")
        ->capture_default_str();
    train_cmd->add_option("--threads", tr.threads, "Accepted for symmetry; training is single-threaded")
        ->capture_default_str();
    train_cmd->callback([&] { action = [&] { return cmd_train(tr, out); }; });

    AnnotationOptions ann;
    auto* tier_cmd = app.add_subcommand("tier", "Emit full_res / zoom2 / zoom3 crops per annotation");
    tier_cmd->add_option("annotations", ann.annotations, "Annotation JSON-Lines")->required();
    tier_cmd->add_option("--out", ann.output, "Output JSON-Lines (default stdout)");
    tier_cmd->callback([&] { action = [&] { return cmd_tier(ann, out); }; });

    auto* filter_cmd = app.add_subcommand("filter", "Automatic bbox-size and caption-length checks");
    filter_cmd->add_option("annotations", ann.annotations, "Annotation JSON-Lines")->required();
    filter_cmd->add_option("--out", ann.output, "Output JSON-Lines (default stdout)");
    filter_cmd->callback([&] { action = [&] { return cmd_filter(ann, out); }; });

    auto* stats_cmd = app.add_subcommand("stats", "Caption-length, bbox-ratio and mask-count statistics");
    stats_cmd->add_option("annotations", ann.annotations, "Annotation JSON-Lines")->required();
    stats_cmd->add_option("--out", ann.output, "JSON report (default stdout)");
    stats_cmd->add_option("--csv", ann.csv, "Histogram CSV");
    stats_cmd->add_option("--caption-edges", ann.caption_edges, "Comma-separated bin edges");
    stats_cmd->add_option("--bbox-edges", ann.bbox_edges, "Comma-separated bin edges");
    stats_cmd->add_option("--mask-edges", ann.mask_edges, "Comma-separated bin edges");
    stats_cmd->callback([&] { action = [&] { return cmd_stats(ann, out); }; });

    GalleryToolOptions gt;
    auto* simmat_cmd = app.add_subcommand("simmat", "Cosine matrix between two groups of an item's embeddings");
    simmat_cmd->add_option("gallery", gt.gallery, "SEMB gallery")->required();
    simmat_cmd->add_option("--item", gt.item, "Item id")->required();
    simmat_cmd->add_option("--rows", gt.rows, "Source kinds for rows")->capture_default_str();
    simmat_cmd->add_option("--cols", gt.cols, "Source kinds for columns")->capture_default_str();
    simmat_cmd->add_option("--out", gt.output, "CSV output (default stdout)");
    simmat_cmd->callback([&] { action = [&] { return cmd_simmat(gt, out); }; });

    auto* prox_cmd = app.add_subcommand("proximity", "Mean cosine of each source kind to the global embedding");
    prox_cmd->add_option("gallery", gt.gallery, "SEMB gallery")->required();
    prox_cmd->add_option("--item", gt.item, "Item id")->required();
    prox_cmd->add_option("--out", gt.output, "JSON output (default stdout)");
    prox_cmd->callback([&] { action = [&] { return cmd_proximity(gt, out); }; });

    auto* export_cmd = app.add_subcommand("export-projection", "Per-embedding CSV for an external 2-D projection");
    export_cmd->add_option("gallery", gt.gallery, "SEMB gallery")->required();
    export_cmd->add_option("--out", gt.output, "CSV output (default stdout)");
    export_cmd->add_option("--sample", gt.sample, "Keep this many randomly chosen items (0 = all)");
    export_cmd->add_option("--seed", gt.seed, "Seed for --sample")->capture_default_str();
    export_cmd->callback([&] { action = [&] { return cmd_export_projection(gt, out); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInvalid;
    }

    try {
        return action();
    } catch (const Error& e) {
        err << "mvr: " << e.what() << "\n";
        return e.code() == ErrorCode::IoError ? kExitIo : kExitInvalid;
    } catch (const std::exception& e) {
        err << "mvr: " << e.what() << "\n";
        return kExitInvalid;
    }
}

}  // namespace mvr::cli
