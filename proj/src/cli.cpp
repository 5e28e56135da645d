#include "agnor/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "agnor/annotation_io.hpp"
#include "agnor/consensus.hpp"
#include "agnor/detection_eval.hpp"
#include "agnor/sampling.hpp"
#include "agnor/report_format.hpp"
#include "agnor/scoring.hpp"
#include "agnor/stats.hpp"
#include "agnor/synthgen.hpp"

namespace agnor::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct GridFlags {
    std::string grid = "4x3";
    std::string numbering = "row-major";

    void add(CLI::App* cmd) {
        cmd->add_option("--grid", grid, "Field grid as COLSxROWS")->capture_default_str();
        cmd->add_option("--numbering", numbering, "Field numbering: row-major or column-major")
            ->check(CLI::IsMember({"row-major", "column-major"}))
            ->capture_default_str();
    }

    GridSpec spec() const { return GridSpec::parse(grid, parse_numbering(numbering)); }

    void echo(ojson& params) const {
        params["grid"] = grid;
        params["numbering"] = numbering;
    }
};

struct OutputFlags {
    std::string out_dir = ".";
    std::string format = "both";

    void add(CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
        cmd->add_option("--format", format, "Report format: json, csv or both")
            ->check(CLI::IsMember({"json", "csv", "both"}))
            ->capture_default_str();
    }
    bool json() const { return format != "csv"; }
    bool csv() const { return format != "json"; }
};

std::string dump(const ojson& j) {
    return j.dump(2) + "\n";
}

std::vector<AnnotationSet> load_all(const std::vector<std::string>& files, std::ostream& err) {
    std::vector<AnnotationSet> sets;
    for (const auto& f : files) {
        std::vector<std::string> warnings;
        try {
            sets.push_back(load_annotation_file(f, &warnings));
        } catch (const std::exception& e) {
            throw ValidationError(f + ": " + e.what());
        }
        for (const auto& w : warnings) {
            err << f << ": warning: " << w << "\n";
        }
    }
    return sets;
}

// Image records keyed by id, checking that every set agrees on dimensions.
std::map<std::string, ImageRecord> collect_images(const std::vector<AnnotationSet>& sets) {
    std::map<std::string, ImageRecord> images;
    for (const auto& set : sets) {
        for (const auto& img : set.images) {
            const auto [it, inserted] = images.emplace(img.image.image_id, img.image);
            if (!inserted && (it->second.width_px != img.image.width_px ||
                              it->second.height_px != img.image.height_px)) {
                throw ValidationError("image \"" + img.image.image_id + "\" has inconsistent dimensions in \"" +
                                      set.source_id + "\"");
            }
        }
    }
    return images;
}

std::vector<NucleusAnnotation> restrict_field(const std::vector<NucleusAnnotation>& anns, const ImageRecord& image,
                                              const GridSpec& grid, int field) {
    if (field == 0) {
        return anns;
    }
    return annotations_in_field(anns, image, grid, field);
}

void check_field(int field, const GridSpec& grid) {
    if (field < 0 || field > grid.field_count()) {
        throw ValidationError("--field must lie in [0, " + std::to_string(grid.field_count()) + "]");
    }
}

void check_unique_sources(const std::vector<AnnotationSet>& sets) {
    std::set<std::string> ids;
    for (const auto& s : sets) {
        if (!ids.insert(s.source_id).second) {
            throw ValidationError("duplicate source_id \"" + s.source_id + "\"");
        }
    }
}

// Clusters per image over the chosen field, in image-id order.
std::vector<std::pair<ImageRecord, std::vector<NucleusCluster>>> cluster_images(
    const std::vector<AnnotationSet>& raters, const GridSpec& grid, int field, double iou_threshold) {
    check_unique_sources(raters);
    std::vector<std::pair<ImageRecord, std::vector<NucleusCluster>>> out;
    for (const auto& [image_id, record] : collect_images(raters)) {
        std::vector<RaterAnnotations> per_rater;
        for (const auto& set : raters) {
            RaterAnnotations ra{set.source_id, {}};
            if (const auto* img = set.find(image_id)) {
                ra.annotations = restrict_field(img->annotations, record, grid, field);
            }
            per_rater.push_back(std::move(ra));
        }
        out.emplace_back(record, cluster_annotations(per_rater, iou_threshold));
    }
    return out;
}

std::string file_stem_for(const std::string& source_id) {
    std::string s = source_id;
    for (char& c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) {
            c = '_';
        }
    }
    return s;
}

int cmd_validate(const std::vector<std::string>& files, std::ostream& out, std::ostream& err) {
    int status = kExitOk;
    for (const auto& f : files) {
        std::vector<std::string> warnings;
        try {
            const auto set = load_annotation_file(f, &warnings);
            for (const auto& w : warnings) {
                err << f << ": warning: " << w << "\n";
            }
            out << f << ": OK (" << set.source_id << ", " << to_string(set.source_kind) << ", "
                << set.images.size() << " images, " << set.annotation_count() << " annotations)\n";
        } catch (const std::exception& e) {
            err << f << ": " << e.what() << "\n";
            status = kExitInput;
        }
    }
    return status;
}

struct ScoreFlags {
    std::vector<std::string> files;
    GridFlags grid;
    int quota = 100;
    double overflow_value = 11.0;
    std::string std_convention = "population";
    OutputFlags output;
};

int cmd_score(const ScoreFlags& f, std::ostream& out, std::ostream& err) {
    ScoreOptions opt;
    opt.grid = f.grid.spec();
    opt.quota = f.quota;
    opt.overflow_value = f.overflow_value;
    opt.std_convention = parse_std_convention(f.std_convention);
    if (!opt.grid.is_standard()) {
        err << "warning: grid " << opt.grid.to_string() << " has " << opt.grid.field_count()
            << " fields; the protocol uses 12\n";
    }

    const auto sets = load_all(f.files, err);
    const auto report = score_sources(sets, opt);

    ojson params;
    params["files"] = f.files;
    f.grid.echo(params);
    params["quota"] = f.quota;
    params["overflow_value"] = f.overflow_value;
    params["std"] = f.std_convention;
    ojson doc;
    doc["command"] = "score";
    doc["parameters"] = std::move(params);
    doc.update(to_json(report));

    const fs::path dir(f.output.out_dir);
    if (f.output.json()) {
        write_text_file(dir / "score_report.json", dump(doc));
    }
    if (f.output.csv()) {
        write_text_file(dir / "score_report.csv", to_csv(report));
    }

    for (const auto& s : report.samples) {
        if (!s.score) {
            err << s.source_id << " / " << s.image_id << ": " << s.error << "\n";
        }
    }
    out << "scored " << report.samples.size() - report.failed_pairs() << " of " << report.samples.size()
        << " source/image pairs\n";
    if (report.errors) {
        out << "mse " << format_number(report.errors->mse) << "  mae " << format_number(report.errors->mae) << "\n";
    }
    if (!report.samples.empty() && report.failed_pairs() == report.samples.size()) {
        err << "every source/image pair failed\n";
        return kExitDegenerate;
    }
    return kExitOk;
}

struct ConsensusFlags {
    std::vector<std::string> files;
    GridFlags grid;
    int field = 1;
    double iou = 0.5;
    int min_raters = 2;
    std::string out_file = "consensus.json";
};

int cmd_consensus(const ConsensusFlags& f, std::ostream& out, std::ostream& err) {
    const auto grid = f.grid.spec();
    check_field(f.field, grid);
    const auto raters = load_all(f.files, err);

    AnnotationSet consensus;
    consensus.source_id = "consensus";
    consensus.source_kind = SourceKind::human;
    for (const auto& [record, clusters] : cluster_images(raters, grid, f.field, f.iou)) {
        ImageAnnotations img{record, {}};
        for (const auto& c : derive_consensus(clusters, f.min_raters)) {
            img.annotations.push_back({c.image_id, c.bbox, c.agnor_class, std::nullopt, c.support});
        }
        consensus.images.push_back(std::move(img));
    }
    validate(consensus);

    ojson doc = to_json(consensus);
    ojson params;
    params["files"] = f.files;
    f.grid.echo(params);
    params["field"] = f.field;
    params["iou"] = f.iou;
    params["min_raters"] = f.min_raters;
    doc["parameters"] = std::move(params);
    write_text_file(f.out_file, dump(doc));
    out << "consensus: " << consensus.annotation_count() << " nuclei over " << consensus.images.size()
        << " images -> " << f.out_file << "\n";
    return kExitOk;
}

struct AgreementFlags {
    std::vector<std::string> files;
    GridFlags grid;
    int field = 1;
    double iou = 0.5;
    double overflow_value = 11.0;
    std::string out_dir = ".";
};

int cmd_agreement(const AgreementFlags& f, std::ostream& out, std::ostream& err) {
    const auto grid = f.grid.spec();
    check_field(f.field, grid);
    const auto raters = load_all(f.files, err);
    if (raters.size() < 2) {
        throw ValidationError("agreement needs at least two rater files");
    }

    std::vector<NucleusCluster> pooled;
    for (auto& [_, clusters] : cluster_images(raters, grid, f.field, f.iou)) {
        pooled.insert(pooled.end(), std::make_move_iterator(clusters.begin()),
                      std::make_move_iterator(clusters.end()));
    }
    std::vector<std::string> rater_ids;
    for (const auto& r : raters) {
        rater_ids.push_back(r.source_id);
    }

    ojson params;
    params["files"] = f.files;
    f.grid.echo(params);
    params["field"] = f.field;
    params["iou"] = f.iou;
    params["overflow_value"] = f.overflow_value;
    ojson doc;
    doc["command"] = "agreement";
    doc["parameters"] = std::move(params);
    doc["raters"] = rater_ids;
    doc["clusters"] = pooled.size();

    int status = kExitOk;
    try {
        const auto inputs = build_rating_inputs(pooled, rater_ids, f.overflow_value);
        const auto result = assess_reliability(inputs);
        doc.update(to_json(result));
        if (!result.complete()) {
            status = kExitDegenerate;
        }
        if (result.kappa) {
            out << "fleiss kappa " << format_number(result.kappa->kappa) << " ("
                << to_string(*result.interpretation) << ")\n";
        }
        if (result.icc) {
            out << "icc(2,1) " << format_number(result.icc->icc_2_1) << "  icc(2,k) "
                << format_number(result.icc->icc_2_k) << "\n";
        }
        for (const auto& e : result.errors) {
            err << e << "\n";
        }
    } catch (const InsufficientDataError& e) {
        doc["items"] = 0;
        doc["fleiss_kappa"] = nullptr;
        doc["icc"] = nullptr;
        doc["errors"] = {e.what()};
        err << e.what() << "\n";
        status = kExitDegenerate;
    }
    write_text_file(fs::path(f.out_dir) / "agreement.json", dump(doc));
    return status;
}

struct EvalFlags {
    std::vector<std::string> files;
    std::string consensus_file;
    GridFlags grid;
    int field = 1;
    double iou = 0.5;
    bool class_agnostic = false;
    int merge_from = 6;
    OutputFlags output;
};

int cmd_evaldet(const EvalFlags& f, std::ostream& out, std::ostream& err) {
    const auto grid = f.grid.spec();
    check_field(f.field, grid);
    const auto truth_sets = load_all({f.consensus_file}, err);
    const auto& truth = truth_sets.front();
    const auto models = load_all(f.files, err);
    check_unique_sources(models);

    MatchOptions opt;
    opt.iou_threshold = f.iou;
    opt.class_aware = !f.class_agnostic;
    opt.merge_from = f.merge_from;

    ojson params;
    params["files"] = f.files;
    params["consensus"] = f.consensus_file;
    f.grid.echo(params);
    params["field"] = f.field;
    params["iou"] = f.iou;
    params["class_aware"] = opt.class_aware;
    params["merge_from"] = f.merge_from;

    const fs::path dir(f.output.out_dir);
    std::vector<ClassMetrics> per_model;
    for (const auto& model : models) {
        if (model.source_kind != SourceKind::model) {
            throw ValidationError("\"" + model.source_id + "\" is not a model detection file");
        }
        std::vector<MatchResult> matches;
        for (const auto& gt_img : truth.images) {
            std::vector<ConsensusNucleus> gt;
            for (const auto& a : restrict_field(gt_img.annotations, gt_img.image, grid, f.field)) {
                gt.push_back({a.image_id, a.bbox, a.agnor_class, a.support.value_or(0)});
            }
            std::vector<NucleusAnnotation> dets;
            if (const auto* img = model.find(gt_img.image.image_id)) {
                if (img->image.width_px != gt_img.image.width_px || img->image.height_px != gt_img.image.height_px) {
                    throw ValidationError("image \"" + gt_img.image.image_id + "\" has inconsistent dimensions in \"" +
                                          model.source_id + "\"");
                }
                dets = restrict_field(img->annotations, gt_img.image, grid, f.field);
            }
            matches.push_back(match(dets, gt, opt));
        }
        const auto metrics = class_metrics(matches, f.merge_from);
        const auto stem = "metrics_" + file_stem_for(model.source_id);
        if (f.output.json()) {
            ojson doc;
            doc["command"] = "eval-det";
            doc["parameters"] = params;
            doc["source_id"] = model.source_id;
            doc.update(to_json(metrics));
            write_text_file(dir / (stem + ".json"), dump(doc));
        }
        if (f.output.csv()) {
            write_text_file(dir / (stem + ".csv"), to_csv(metrics));
        }
        out << model.source_id << ":";
        for (const auto& b : metrics.buckets) {
            out << " " << b.label << "=" << (b.supported ? format_number(b.f1) : "-");
        }
        out << "\n";
        per_model.push_back(metrics);
    }

    const auto summary = summarize_models(per_model);
    if (f.output.json()) {
        ojson doc;
        doc["command"] = "eval-det";
        doc["parameters"] = params;
        std::vector<std::string> ids;
        for (const auto& m : models) {
            ids.push_back(m.source_id);
        }
        doc["models"] = ids;
        doc.update(to_json(summary));
        write_text_file(dir / "ensemble_summary.json", dump(doc));
    }
    if (f.output.csv()) {
        write_text_file(dir / "ensemble_summary.csv", to_csv(summary));
    }
    return kExitOk;
}

struct SynthFlags {
    std::string config_file;
    std::string out_dir = "synth";
    int n_raters = 6;
    int n_models = 5;
    int downshift_from = 0;
    double downshift_prob = 1.0;
    SynthConfig cfg;
};

int cmd_synth(SynthFlags f, const CLI::App& cmd, std::ostream& out) {
    if (!f.config_file.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_text_file(f.config_file));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(f.config_file + ": " + e.what());
        }
        const SynthConfig base = SynthConfig::from_json(j);
        // Explicit flags override the config file.
        SynthConfig merged = base;
        const auto given = [&](const char* name) { return cmd.count(name) > 0; };
        if (given("--seed")) merged.seed = f.cfg.seed;
        if (given("--images")) merged.n_images = f.cfg.n_images;
        if (given("--nuclei")) merged.nuclei_per_image = f.cfg.nuclei_per_image;
        if (given("--width")) merged.image_width = f.cfg.image_width;
        if (given("--height")) merged.image_height = f.cfg.image_height;
        if (given("--box-min")) merged.box_min = f.cfg.box_min;
        if (given("--box-max")) merged.box_max = f.cfg.box_max;
        if (given("--rater-noise")) merged.rater_noise = f.cfg.rater_noise;
        if (given("--rater-miss")) merged.rater_miss_rate = f.cfg.rater_miss_rate;
        if (given("--detector-miss")) merged.detector_miss_rate = f.cfg.detector_miss_rate;
        if (given("--jitter")) merged.jitter_px = f.cfg.jitter_px;
        f.cfg = merged;
    }
    if (f.downshift_from > 0) {
        f.cfg.detector_confusion = downshift_confusion(f.downshift_from, f.downshift_prob);
    }
    f.cfg.validate();

    const fs::path dir(f.out_dir);
    const auto truth = generate_ground_truth(f.cfg);
    std::vector<std::string> files{"truth.json"};
    write_annotation_file(truth, dir / "truth.json");
    for (const auto& rater : simulate_raters(truth, f.cfg, f.n_raters)) {
        files.push_back(rater.source_id + ".json");
        write_annotation_file(rater, dir / files.back());
    }
    for (int m = 1; m <= f.n_models; ++m) {
        const auto det = simulate_detector(truth, f.cfg, "model_" + std::to_string(m));
        files.push_back(det.source_id + ".json");
        write_annotation_file(det, dir / files.back());
    }
    write_text_file(dir / "manifest.json", dump(make_manifest(f.cfg, f.n_raters, f.n_models, files)));
    out << "wrote " << files.size() << " annotation files (" << truth.annotation_count() << " nuclei) to "
        << dir.string() << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"AgNOR scoring and rater-agreement toolkit", "agnor-bench"};
    app.require_subcommand(1);

    std::vector<std::string> validate_files;
    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate annotation files");
    validate_cmd->add_option("files", validate_files, "Annotation files")->required();

    ScoreFlags score;
    auto* score_cmd = app.add_subcommand("score", "Per-source, expert-panel and ensemble AgNOR-scores");
    score_cmd->add_option("files", score.files, "Rater and model annotation files")->required();
    score.grid.add(score_cmd);
    score_cmd->add_option("--quota", score.quota, "Minimum nuclei per sample")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    score_cmd->add_option("--overflow-value", score.overflow_value, "Numeric value of the >10 class")
        ->check(CLI::Range(11.0, 1e9))
        ->capture_default_str();
    score_cmd->add_option("--std", score.std_convention, "Expert std convention: population or sample")
        ->check(CLI::IsMember({"population", "sample"}))
        ->capture_default_str();
    score.output.add(score_cmd);

    ConsensusFlags consensus;
    auto* consensus_cmd = app.add_subcommand("consensus", "Majority-vote ground truth from rater files");
    consensus_cmd->add_option("files", consensus.files, "Rater annotation files")->required();
    consensus.grid.add(consensus_cmd);
    consensus_cmd->add_option("--field", consensus.field, "Field to aggregate (0 = whole image)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    consensus_cmd->add_option("--iou", consensus.iou, "Cross-rater IoU threshold")
        ->check(CLI::Range(1e-12, 1.0))
        ->capture_default_str();
    consensus_cmd->add_option("--min-raters", consensus.min_raters, "Minimum raters per consensus nucleus")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    consensus_cmd->add_option("--out", consensus.out_file, "Output annotation file")->capture_default_str();

    AgreementFlags agreement;
    auto* agreement_cmd = app.add_subcommand("agreement", "Fleiss' kappa and ICC between raters");
    agreement_cmd->add_option("files", agreement.files, "Rater annotation files")->required();
    agreement.grid.add(agreement_cmd);
    agreement_cmd->add_option("--field", agreement.field, "Field to compare (0 = whole image)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    agreement_cmd->add_option("--iou", agreement.iou, "Cross-rater IoU threshold")
        ->check(CLI::Range(1e-12, 1.0))
        ->capture_default_str();
    agreement_cmd->add_option("--overflow-value", agreement.overflow_value, "Numeric value of the >10 class")
        ->check(CLI::Range(11.0, 1e9))
        ->capture_default_str();
    agreement_cmd->add_option("--out", agreement.out_dir, "Output directory")->capture_default_str();

    EvalFlags eval;
    auto* eval_cmd = app.add_subcommand("eval-det", "Per-class detection metrics against consensus");
    eval_cmd->add_option("files", eval.files, "Model detection files")->required();
    eval_cmd->add_option("--consensus", eval.consensus_file, "Consensus annotation file")->required();
    eval.grid.add(eval_cmd);
    eval_cmd->add_option("--field", eval.field, "Field to evaluate (0 = whole image)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    eval_cmd->add_option("--iou", eval.iou, "Detection IoU threshold")
        ->check(CLI::Range(1e-12, 1.0))
        ->capture_default_str();
    eval_cmd->add_flag("--class-agnostic", eval.class_agnostic, "Match on localization only");
    eval_cmd->add_option("--merge-from", eval.merge_from, "First class of the merged bucket")
        ->check(CLI::Range(1, 11))
        ->capture_default_str();
    eval.output.add(eval_cmd);

    SynthFlags synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a seeded synthetic dataset");
    synth_cmd->add_option("--config", synth.config_file, "JSON synth config (flags override)");
    synth_cmd->add_option("--out", synth.out_dir, "Output directory")->capture_default_str();
    synth_cmd->add_option("--seed", synth.cfg.seed, "Random seed")->capture_default_str();
    synth_cmd->add_option("--images", synth.cfg.n_images, "Number of images")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth_cmd->add_option("--nuclei", synth.cfg.nuclei_per_image, "Nuclei per image")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth_cmd->add_option("--width", synth.cfg.image_width, "Image width in pixels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--height", synth.cfg.image_height, "Image height in pixels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--box-min", synth.cfg.box_min, "Minimum box edge")->capture_default_str();
    synth_cmd->add_option("--box-max", synth.cfg.box_max, "Maximum box edge")->capture_default_str();
    synth_cmd->add_option("--raters", synth.n_raters, "Simulated raters")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth_cmd->add_option("--models", synth.n_models, "Simulated detectors")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth_cmd->add_option("--rater-noise", synth.cfg.rater_noise, "P(rater label off by one)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth_cmd->add_option("--rater-miss", synth.cfg.rater_miss_rate, "P(rater skips a nucleus)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth_cmd->add_option("--detector-miss", synth.cfg.detector_miss_rate, "P(detector misses a nucleus)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth_cmd->add_option("--jitter", synth.cfg.jitter_px, "Max rater box-edge jitter in pixels")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth_cmd->add_option("--downshift-from", synth.downshift_from,
                          "Detector relabels classes >= this one downward by one (0 = off)")
        ->check(CLI::Range(0, 11))
        ->capture_default_str();
    synth_cmd->add_option("--downshift-prob", synth.downshift_prob, "Probability of the downward relabel")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*validate_cmd) {
            return cmd_validate(validate_files, out, err);
        }
        if (*score_cmd) {
            return cmd_score(score, out, err);
        }
        if (*consensus_cmd) {
            return cmd_consensus(consensus, out, err);
        }
        if (*agreement_cmd) {
            return cmd_agreement(agreement, out, err);
        }
        if (*eval_cmd) {
            return cmd_evaldet(eval, out, err);
        }
        if (*synth_cmd) {
            return cmd_synth(synth, *synth_cmd, out);
        }
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const InsufficientDataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, std::cout, std::cerr);
}

}  // namespace agnor::cli
