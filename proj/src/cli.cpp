#include "medcorpus/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "medcorpus/corpus.hpp"
#include "medcorpus/error.hpp"
#include "medcorpus/experiments.hpp"
#include "medcorpus/formats.hpp"
#include "medcorpus/manifest.hpp"
#include "medcorpus/metrics.hpp"
#include "medcorpus/pipeline.hpp"
#include "medcorpus/quality_filter.hpp"
#include "medcorpus/report.hpp"
#include "medcorpus/segmenter.hpp"
#include "medcorpus/tokenizer.hpp"
#include "medcorpus/translation.hpp"

namespace medcorpus::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Documents are processed in fixed-size chunks so memory stays bounded and
// chunk boundaries never depend on the worker count.
constexpr std::size_t kChunkDocuments = 4096;

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::shared_ptr<spdlog::logger> log;
    std::vector<std::string> argv;
    int workers = 0;
    std::string manifest_override;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

class InputFile {
public:
    explicit InputFile(const std::string& path) {
        if (path == "-") {
            stream_ = &std::cin;
            return;
        }
        file_.open(path, std::ios::binary);
        if (!file_) {
            throw DataError("cannot open " + path);
        }
        stream_ = &file_;
    }
    std::istream& stream() { return *stream_; }

private:
    std::ifstream file_;
    std::istream* stream_ = nullptr;
};

class OutputFile {
public:
    OutputFile(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_.open(path, std::ios::binary | std::ios::trunc);
        if (!file_) {
            throw DataError("cannot write " + path);
        }
        stream_ = &file_;
    }
    std::ostream& stream() { return *stream_; }
    void close() {
        stream_->flush();
        if (file_.is_open()) {
            file_.close();
            if (!file_) {
                throw DataError("write failed");
            }
        }
    }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

void finish(Context& ctx, RunManifest manifest, const std::string& primary_output) {
    check_counts(manifest);
    manifest.argv = ctx.argv;
    manifest.workers = ctx.workers;
    manifest.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
    fs::path target;
    if (!ctx.manifest_override.empty()) {
        target = ctx.manifest_override;
    } else if (!primary_output.empty() && primary_output != "-") {
        target = manifest_path_for(primary_output);
    } else {
        ctx.log->debug("no output file; manifest not written");
        return;
    }
    write_manifest(manifest, target);
}

OnBadRecord bad_record_mode(bool skip_bad) { return skip_bad ? OnBadRecord::SkipAndLog : OnBadRecord::FailFast; }

void log_skipped(Context& ctx, const DocumentReader& reader, std::size_t& already_logged) {
    const auto& skipped = reader.skipped();
    for (; already_logged < skipped.size(); ++already_logged) {
        ctx.log->warn("skipped line {}: {}", skipped[already_logged].line, skipped[already_logged].message);
    }
}

// ---------------------------------------------------------------- ingest

struct IngestOptions {
    std::string in;
    std::string out;
    bool skip_bad = false;
};

int cmd_ingest(const IngestOptions& o, Context& ctx) {
    InputFile in(o.in);
    OutputFile out(o.out, ctx.out);
    DocumentReader reader(in.stream(), bad_record_mode(o.skip_bad));
    std::size_t documents = 0;
    std::size_t logged = 0;
    while (auto doc = reader.next()) {
        out.stream() << to_jsonl_line(*doc) << '\n';
        ++documents;
        log_skipped(ctx, reader, logged);
    }
    log_skipped(ctx, reader, logged);
    out.close();

    RunManifest m;
    m.command = "ingest";
    m.config = {{"skip_bad", o.skip_bad}};
    m.inputs = {o.in};
    m.outputs = {o.out};
    m.counts = {{"documents", documents}, {"skipped", reader.skipped().size()}};
    finish(ctx, std::move(m), o.out);
    ctx.log->info("ingested {} documents ({} skipped)", documents, reader.skipped().size());
    return kExitOk;
}

// ---------------------------------------------------------------- filter

struct FilterOptions {
    std::string in;
    std::string out;
    std::string drop_log;
    double min_letter_ratio = 0.60;
    double min_words_per_line = 3.0;
    bool skip_bad = false;
};

struct FilterCounts {
    std::size_t documents_read = 0;
    std::size_t documents_written = 0;
    std::size_t read = 0;
    std::size_t kept = 0;
    std::size_t dropped = 0;
};

void write_filtered(const std::vector<FilteredDocument>& results, std::ostream& out, std::ostream* drop_log,
                    FilterCounts& counts) {
    for (const auto& r : results) {
        ++counts.documents_read;
        counts.read += r.paragraphs;
        counts.kept += r.kept;
        counts.dropped += r.dropped.size();
        if (r.kept > 0) {
            out << to_jsonl_line(r.doc) << '\n';
            ++counts.documents_written;
        }
        if (drop_log) {
            for (const auto& [para, verdict] : r.dropped) {
                *drop_log << verdict_to_json(para, verdict).dump() << '\n';
            }
        }
    }
}

int cmd_filter(const FilterOptions& o, Context& ctx) {
    const FilterConfig cfg{o.min_letter_ratio, o.min_words_per_line};
    cfg.validate();
    InputFile in(o.in);
    OutputFile out(o.out, ctx.out);
    std::optional<OutputFile> drops;
    if (!o.drop_log.empty()) {
        drops.emplace(o.drop_log, ctx.err);
    }
    DocumentReader reader(in.stream(), bad_record_mode(o.skip_bad));
    FilterCounts counts;
    std::vector<Document> chunk;
    std::size_t logged = 0;
    auto flush = [&] {
        const auto results = parallel::filter_documents(chunk, cfg, ctx.workers);
        write_filtered(results, out.stream(), drops ? &drops->stream() : nullptr, counts);
        chunk.clear();
        log_skipped(ctx, reader, logged);
    };
    while (auto doc = reader.next()) {
        chunk.push_back(std::move(*doc));
        if (chunk.size() == kChunkDocuments) {
            flush();
        }
    }
    flush();
    out.close();
    if (drops) {
        drops->close();
    }

    RunManifest m;
    m.command = "filter";
    m.config = {{"min_letter_ratio", cfg.min_letter_ratio},
                {"min_words_per_line", cfg.min_words_per_line},
                {"skip_bad", o.skip_bad}};
    m.inputs = {o.in};
    m.outputs = {o.out};
    if (!o.drop_log.empty()) {
        m.outputs.push_back(o.drop_log);
    }
    m.counts = {{"documents_read", counts.documents_read},
                {"documents_written", counts.documents_written},
                {"read", counts.read},
                {"kept", counts.kept},
                {"dropped", counts.dropped},
                {"skipped_records", reader.skipped().size()}};
    finish(ctx, std::move(m), o.out);
    ctx.log->info("filter: {} paragraphs read, {} kept, {} dropped", counts.read, counts.kept, counts.dropped);
    return kExitOk;
}

// ---------------------------------------------------------------- segment

struct SegmentOptions {
    std::string in;
    std::string out;
    std::size_t max_tokens = 128;
    std::string tokenizer = "whitespace";
    std::string abbrev_file;
    bool prefilter = false;
    double min_letter_ratio = 0.60;
    double min_words_per_line = 3.0;
    bool skip_bad = false;
};

int cmd_segment(const SegmentOptions& o, Context& ctx) {
    SegmenterConfig cfg;
    cfg.max_tokens = o.max_tokens;
    cfg.tokenizer = parse_tokenizer_spec(o.tokenizer);
    if (!o.abbrev_file.empty()) {
        cfg.abbreviations = load_abbreviations(o.abbrev_file);
    }
    cfg.validate();
    const FilterConfig filter_cfg{o.min_letter_ratio, o.min_words_per_line};
    if (o.prefilter) {
        filter_cfg.validate();
    }

    InputFile in(o.in);
    OutputFile out(o.out, ctx.out);
    DocumentReader reader(in.stream(), bad_record_mode(o.skip_bad));
    FilterCounts fcounts;
    std::size_t documents = 0;
    std::size_t segments = 0;
    std::size_t tokens = 0;
    std::size_t hard_split = 0;
    std::vector<Document> chunk;
    std::size_t logged = 0;
    std::ostringstream discard;
    auto flush = [&] {
        std::vector<Document> input;
        if (o.prefilter) {
            auto filtered = parallel::filter_documents(chunk, filter_cfg, ctx.workers);
            write_filtered(filtered, discard, nullptr, fcounts);
            discard.str({});
            for (auto& r : filtered) {
                if (r.kept > 0) {
                    input.push_back(std::move(r.doc));
                }
            }
        } else {
            input = std::move(chunk);
        }
        const auto per_doc = parallel::segment_documents(input, cfg, ctx.workers);
        for (const auto& segs : per_doc) {
            ++documents;
            for (const auto& s : segs) {
                out.stream() << to_jsonl_line(s) << '\n';
                ++segments;
                tokens += s.token_count;
                hard_split += s.hard_split ? 1 : 0;
            }
        }
        chunk.clear();
        log_skipped(ctx, reader, logged);
    };
    while (auto doc = reader.next()) {
        chunk.push_back(std::move(*doc));
        if (chunk.size() == kChunkDocuments) {
            flush();
        }
    }
    flush();
    out.close();

    RunManifest m;
    m.command = "segment";
    m.config = {{"max_tokens", cfg.max_tokens},
                {"tokenizer", o.tokenizer},
                {"abbreviations", cfg.abbreviations},
                {"prefilter", o.prefilter},
                {"skip_bad", o.skip_bad}};
    if (o.prefilter) {
        m.config["min_letter_ratio"] = filter_cfg.min_letter_ratio;
        m.config["min_words_per_line"] = filter_cfg.min_words_per_line;
    }
    m.inputs = {o.in};
    if (!o.abbrev_file.empty()) {
        m.inputs.push_back(o.abbrev_file);
    }
    m.outputs = {o.out};
    m.counts = {{"documents", documents},
                {"segments", segments},
                {"tokens", tokens},
                {"hard_split_segments", hard_split},
                {"skipped_records", reader.skipped().size()}};
    if (o.prefilter) {
        m.counts["read"] = fcounts.read;
        m.counts["kept"] = fcounts.kept;
        m.counts["dropped"] = fcounts.dropped;
    }
    finish(ctx, std::move(m), o.out);
    ctx.log->info("segment: {} documents -> {} segments ({} tokens)", documents, segments, tokens);
    return kExitOk;
}

// ---------------------------------------------------------------- translate

struct TranslateOptions {
    std::string in;
    std::string out;
    std::string failures;
    std::string translations_out;
    std::string backend = "mock";
    std::string mock_mode = "echo";
    int mock_failures = 0;
    std::string url;
    std::size_t batch_size = 16;
    std::size_t max_in_flight = 4;
    int max_retries = 3;
    long backoff_ms = 200;
    std::string src = "en";
    std::string tgt = "de";
};

std::unique_ptr<TranslationBackend> make_backend(const TranslateOptions& o, std::string& url_used) {
    if (o.backend == "http") {
        url_used = o.url;
        if (url_used.empty()) {
            if (const char* env = std::getenv("MEDCORPUS_MT_URL")) {
                url_used = env;
            }
        }
        if (url_used.empty()) {
            throw ConfigError("--backend http needs --url or MEDCORPUS_MT_URL");
        }
        return std::make_unique<HttpBackend>(url_used);
    }
    if (o.mock_mode == "echo") {
        return std::make_unique<EchoBackend>();
    }
    if (o.mock_mode == "scripted") {
        return std::make_unique<ScriptedFaultBackend>(o.mock_failures);
    }
    throw ConfigError("--mock-mode must be echo or scripted");
}

int cmd_translate(const TranslateOptions& o, Context& ctx) {
    const auto segments = read_segments_jsonl(o.in);
    std::string url;
    auto backend = make_backend(o, url);
    const auto batches = plan_batches(segments, o.batch_size, o.src, o.tgt);

    medcorpus::TranslateOptions topts;
    topts.max_in_flight = o.max_in_flight;
    topts.retry.max_retries = o.max_retries;
    topts.retry.initial_backoff = std::chrono::milliseconds(o.backoff_ms);
    const auto result = translate_all(batches, *backend, topts);

    std::set<std::string> failed_docs;
    std::set<std::string> failed_ids;
    for (const auto& f : result.failures) {
        failed_ids.insert(f.segment_ids.begin(), f.segment_ids.end());
        ctx.log->warn("batch {} failed after {} attempts: {}", f.batch_index, f.attempts, f.last_error);
    }
    for (const auto& s : segments) {
        if (failed_ids.contains(segment_id(s))) {
            failed_docs.insert(s.doc_id);
        }
    }
    std::vector<Segment> complete;
    for (const auto& s : segments) {
        if (!failed_docs.contains(s.doc_id)) {
            complete.push_back(s);
        }
    }
    std::vector<TranslatedSegment> usable;
    for (const auto& t : result.translated) {
        const auto doc = t.segment_id.substr(0, t.segment_id.rfind('#'));
        if (!failed_docs.contains(doc)) {
            usable.push_back(t);
        }
    }
    const auto docs = reassemble(usable, complete);

    OutputFile out(o.out, ctx.out);
    write_jsonl(out.stream(), docs);
    out.close();

    const std::string failures_path =
        !o.failures.empty() ? o.failures : (o.out.empty() || o.out == "-" ? std::string{} : o.out + ".failures.json");
    auto manifest_json = failure_manifest(result);
    manifest_json["incomplete_documents"] = failed_docs;
    if (!failures_path.empty()) {
        OutputFile f(failures_path, ctx.err);
        f.stream() << manifest_json.dump(2) << '\n';
        f.close();
    }
    if (!o.translations_out.empty()) {
        OutputFile t(o.translations_out, ctx.err);
        for (const auto& seg : result.translated) {
            t.stream() << json{{"segment_id", seg.segment_id},
                               {"source_text", seg.source_text},
                               {"translated_text", seg.translated_text},
                               {"backend_name", seg.backend_name},
                               {"attempt_count", seg.attempt_count}}
                              .dump()
                       << '\n';
        }
        t.close();
    }

    std::size_t failed_segments = 0;
    for (const auto& f : result.failures) {
        failed_segments += f.segment_ids.size();
    }
    RunManifest m;
    m.command = "translate";
    m.config = {{"backend", o.backend == "http" ? "http" : "mock-" + o.mock_mode},
                {"batch_size", o.batch_size},
                {"max_in_flight", o.max_in_flight},
                {"max_retries", o.max_retries},
                {"backoff_ms", o.backoff_ms},
                {"src", o.src},
                {"tgt", o.tgt}};
    if (!url.empty()) {
        m.config["url"] = url;
    }
    m.inputs = {o.in};
    m.outputs = {o.out};
    if (!failures_path.empty()) {
        m.outputs.push_back(failures_path);
    }
    m.counts = {{"segments", segments.size()},
                {"batches", batches.size()},
                {"translated", result.translated.size()},
                {"failed", failed_segments},
                {"documents_written", docs.size()},
                {"documents_incomplete", failed_docs.size()}};
    finish(ctx, std::move(m), o.out);
    ctx.log->info("translate: {} of {} segments translated, {} failed", result.translated.size(), segments.size(),
                  failed_segments);
    return result.failures.empty() ? kExitOk : kExitDataError;
}

// ---------------------------------------------------------------- stats

struct StatsOptions {
    std::vector<std::string> in;
    std::string tokenizer = "whitespace";
    std::string out;
    std::string csv;
};

int cmd_stats(const StatsOptions& o, Context& ctx) {
    const auto tk = parse_tokenizer_spec(o.tokenizer);
    CorpusStats stats;
    for (const auto& path : o.in) {
        InputFile in(path);
        const auto fallback = fs::path(path).stem().string();
        std::size_t records = 0;
        std::vector<std::string> texts;
        std::vector<std::string> sources;
        auto flush = [&] {
            const auto counts = parallel::count_tokens(texts, tk, ctx.workers);
            for (std::size_t i = 0; i < counts.size(); ++i) {
                stats.add(sources[i], counts[i]);
            }
            texts.clear();
            sources.clear();
        };
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in.stream(), line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            json j;
            try {
                j = json::parse(line);
                texts.push_back(j.at("text").get<std::string>());
            } catch (const json::exception& e) {
                throw DataError(path + " line " + std::to_string(lineno) + ": " + e.what());
            }
            const auto src = j.value("source", std::string{});
            sources.push_back(src.empty() ? fallback : src);
            ++records;
            if (texts.size() == kChunkDocuments) {
                flush();
            }
        }
        flush();
        if (records == 0) {
            // An empty shard still gets its (zero) row.
            stats.add_source(fallback);
        }
    }
    OutputFile out(o.out, ctx.out);
    out.stream() << stats.to_markdown();
    out.close();
    if (!o.csv.empty()) {
        OutputFile csv(o.csv, ctx.err);
        csv.stream() << stats.to_csv();
        csv.close();
    }
    const auto total = stats.total();
    RunManifest m;
    m.command = "stats";
    m.config = {{"tokenizer", o.tokenizer}};
    m.inputs = o.in;
    m.outputs = {o.out};
    if (!o.csv.empty()) {
        m.outputs.push_back(o.csv);
    }
    m.counts = {{"documents", total.documents}, {"tokens", total.tokens}, {"sources", stats.rows().size()}};
    finish(ctx, std::move(m), o.out.empty() ? o.csv : o.out);
    return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalCommon {
    std::string gold;
    std::string pred;
    std::string out;
    std::string model;
    std::string task;
};

void print_report(std::ostream& os, const MetricReport& r) {
    os << "P = " << format_score(r.precision, 3, true) << "  R = " << format_score(r.recall, 3, true)
       << "  F1 = " << format_score(r.f1, 3, true);
    if (r.em) {
        os << "  EM = " << format_score(*r.em, 3, true);
    }
    os << "  (tp=" << r.tp << " fp=" << r.fp << " fn=" << r.fn << " n=" << r.n << ")\n";
}

int finish_eval(const std::string& command, const EvalCommon& o, const MetricReport& r, json config,
                Context& ctx) {
    print_report(ctx.out, r);
    auto j = to_json(r);
    if (!o.model.empty()) {
        j["model"] = o.model;
    }
    if (!o.task.empty()) {
        j["task"] = o.task;
    }
    if (!o.out.empty()) {
        OutputFile out(o.out, ctx.out);
        out.stream() << j.dump(2) << '\n';
        out.close();
    }
    RunManifest m;
    m.command = command;
    m.config = std::move(config);
    m.inputs = {o.gold};
    if (!o.pred.empty()) {
        m.inputs.push_back(o.pred);
    }
    m.outputs = {o.out};
    m.counts = {{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn}, {"n", r.n}};
    finish(ctx, std::move(m), o.out);
    return kExitOk;
}

int cmd_eval_ner(const EvalCommon& o, Context& ctx) {
    const auto input = o.pred.empty() ? load_ner_combined(o.gold) : load_ner_pair(o.gold, o.pred);
    return finish_eval("eval-ner", o, ner_micro_prf(input.gold, input.pred), json::object(), ctx);
}

int cmd_eval_multilabel(const EvalCommon& o, double threshold, Context& ctx) {
    const auto gold = read_label_sets(o.gold);
    const auto pred = read_label_predictions(o.pred, threshold);
    return finish_eval("eval-multilabel", o, multilabel_micro_prf(gold, pred), {{"threshold", threshold}}, ctx);
}

int cmd_eval_qa(const EvalCommon& o, const std::string& articles, Context& ctx) {
    QaOptions opts{parse_article_set(articles)};
    std::size_t missing = 0;
    const auto answers = join_qa(read_squad_gold(o.gold), read_qa_predictions(o.pred), &missing);
    if (missing > 0) {
        ctx.log->warn("{} questions have no prediction and score 0", missing);
    }
    return finish_eval("eval-qa", o, qa_f1_em(answers, opts), {{"articles", articles}}, ctx);
}

// ---------------------------------------------------------------- cv-split / config / report

struct CvOptions {
    std::size_t k = 5;
    std::uint64_t seed = 0;
    std::string ids;
    std::string out;
};

int cmd_cv_split(const CvOptions& o, Context& ctx) {
    InputFile in(o.ids);
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(in.stream(), line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            ids.push_back(line);
        }
    }
    const auto folds = make_folds(ids, o.k, o.seed);
    OutputFile out(o.out, ctx.out);
    out.stream() << to_json(folds).dump(2) << '\n';
    out.close();

    RunManifest m;
    m.command = "cv-split";
    m.config = {{"k", o.k}, {"seed", o.seed}};
    m.inputs = {o.ids};
    m.outputs = {o.out};
    m.counts = {{"ids", ids.size()}, {"folds", o.k}};
    finish(ctx, std::move(m), o.out);
    return kExitOk;
}

struct ConfigOptions {
    std::string task;
    std::string size = "base";
    std::string out;
    std::string labels;
};

int cmd_config(const ConfigOptions& o, Context& ctx) {
    const auto cfg = emit_task_config(o.task, parse_model_size(o.size));
    std::string body = cfg.to_key_values();
    std::size_t weighted = 0;
    if (!o.labels.empty()) {
        const auto docs = read_label_sets(o.labels);
        if (docs.empty()) {
            throw DataError(o.labels + " holds no training documents");
        }
        const auto weights = class_weights(count_labels(docs), docs.size());
        for (const auto& label : weights.negative) {
            ctx.log->warn("label {} occurs in every training document; its weight is negative", label);
        }
        std::ostringstream lines;
        lines.precision(17);
        lines << "pos_weight_samples=" << weights.total << '\n';
        for (const auto& [label, w] : weights.weights) {
            lines << "pos_weight." << label << '=' << w << '\n';
        }
        body += lines.str();
        weighted = weights.weights.size();
    }
    OutputFile out(o.out, ctx.out);
    out.stream() << body;
    out.close();

    RunManifest m;
    m.command = "config";
    m.config = {{"task", cfg.task}, {"size", std::string(to_string(cfg.size))}};
    if (!o.labels.empty()) {
        m.inputs = {o.labels};
    }
    m.outputs = {o.out};
    m.counts = {{"weighted_labels", weighted}};
    finish(ctx, std::move(m), o.out);
    return kExitOk;
}

struct ReportOptions {
    std::vector<std::string> in;
    std::string out;
};

int cmd_report(const ReportOptions& o, Context& ctx) {
    std::vector<ReportEntry> entries;
    for (const auto& path : o.in) {
        InputFile in(path);
        json j;
        try {
            j = json::parse(in.stream());
        } catch (const json::exception& e) {
            throw DataError(path + ": " + e.what());
        }
        try {
            if (j.is_array()) {
                for (const auto& item : j) {
                    entries.push_back(report_entry_from_json(item));
                }
            } else {
                entries.push_back(report_entry_from_json(j));
            }
        } catch (const DataError& e) {
            throw DataError(path + ": " + e.what());
        }
    }
    const auto rendered = render_report(entries);
    for (const auto& w : rendered.warnings) {
        ctx.log->warn("{}", w);
    }
    OutputFile out(o.out, ctx.out);
    out.stream() << rendered.markdown;
    out.close();

    RunManifest m;
    m.command = "report";
    m.inputs = o.in;
    m.outputs = {o.out};
    m.counts = {{"reports", entries.size()}, {"warnings", rendered.warnings.size()}};
    finish(ctx, std::move(m), o.out);
    return kExitOk;
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err, const std::string& level) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
    auto logger = std::make_shared<spdlog::logger>("medcorpus", sink);
    logger->set_pattern("[%l] %v");
    logger->set_level(spdlog::level::from_str(level));
    return logger;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Clinical corpus construction and benchmark evaluation toolchain", "medcorpus"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MEDCORPUS_VERSION);

    int workers = 0;
    std::string log_level = "info";
    std::string manifest;
    app.add_option("--workers", workers, "Worker threads for filter/segment/stats, in-flight batches for translate (0 = default)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")
        ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
    app.add_option("--manifest", manifest, "Run manifest path (default: <output>.manifest.json)");

    IngestOptions ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Validate and normalize a JSONL document collection");
    ingest_cmd->add_option("--in", ingest.in, "Input JSONL ('-' for stdin)")->required();
    ingest_cmd->add_option("--out", ingest.out, "Output JSONL ('-' for stdout)")->required();
    ingest_cmd->add_flag("--skip-bad", ingest.skip_bad, "Skip and log malformed records instead of failing");

    FilterOptions filter;
    auto* filter_cmd = app.add_subcommand("filter", "Drop low-quality paragraphs");
    filter_cmd->add_option("--in", filter.in, "Input JSONL")->required();
    filter_cmd->add_option("--out", filter.out, "Output JSONL")->required();
    filter_cmd->add_option("--min-letter-ratio", filter.min_letter_ratio, "Minimum letter ratio")->capture_default_str();
    filter_cmd->add_option("--min-words-per-line", filter.min_words_per_line, "Minimum average words per line")->capture_default_str();
    filter_cmd->add_option("--drop-log", filter.drop_log, "JSONL verdicts of dropped paragraphs");
    filter_cmd->add_flag("--skip-bad", filter.skip_bad, "Skip and log malformed records");

    SegmentOptions segment;
    auto* segment_cmd = app.add_subcommand("segment", "Split documents into token-budgeted segments");
    segment_cmd->add_option("--in", segment.in, "Input JSONL")->required();
    segment_cmd->add_option("--out", segment.out, "Output segment JSONL")->required();
    segment_cmd->add_option("--max-tokens", segment.max_tokens, "Token budget per segment")->capture_default_str();
    segment_cmd->add_option("--tokenizer", segment.tokenizer, "whitespace | subword:<vocab-path>")->capture_default_str();
    segment_cmd->add_option("--abbrev-file", segment.abbrev_file, "Abbreviations, one per line");
    segment_cmd->add_flag("--filter", segment.prefilter, "Apply the paragraph quality filter first");
    segment_cmd->add_option("--min-letter-ratio", segment.min_letter_ratio, "With --filter")->capture_default_str();
    segment_cmd->add_option("--min-words-per-line", segment.min_words_per_line, "With --filter")->capture_default_str();
    segment_cmd->add_flag("--skip-bad", segment.skip_bad, "Skip and log malformed records");

    TranslateOptions translate;
    auto* translate_cmd = app.add_subcommand("translate", "Translate segments and reassemble documents");
    translate_cmd->add_option("--in", translate.in, "Segment JSONL")->required();
    translate_cmd->add_option("--out", translate.out, "Translated document JSONL")->required();
    translate_cmd->add_option("--backend", translate.backend, "http | mock")->capture_default_str()
        ->check(CLI::IsMember({"http", "mock"}));
    translate_cmd->add_option("--mock-mode", translate.mock_mode, "echo | scripted")->capture_default_str();
    translate_cmd->add_option("--mock-failures", translate.mock_failures,
                              "Scripted mode: failures per batch before success (-1 = always)")->capture_default_str();
    translate_cmd->add_option("--url", translate.url, "Backend base URL (default $MEDCORPUS_MT_URL)");
    translate_cmd->add_option("--batch-size", translate.batch_size, "Segments per request")->capture_default_str()
        ->check(CLI::PositiveNumber);
    auto* in_flight_opt = translate_cmd->add_option("--max-in-flight", translate.max_in_flight,
                                                    "Concurrent requests")->capture_default_str()
                              ->check(CLI::PositiveNumber);
    translate_cmd->add_option("--max-retries", translate.max_retries, "Retries per batch")->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    translate_cmd->add_option("--backoff-ms", translate.backoff_ms, "Initial retry backoff")->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    translate_cmd->add_option("--src", translate.src, "Source language")->capture_default_str();
    translate_cmd->add_option("--tgt", translate.tgt, "Target language")->capture_default_str();
    translate_cmd->add_option("--failures", translate.failures, "Failure manifest (default <out>.failures.json)");
    translate_cmd->add_option("--translations-out", translate.translations_out, "Per-segment translation JSONL");

    StatsOptions stats;
    auto* stats_cmd = app.add_subcommand("stats", "Token and document totals per source");
    stats_cmd->add_option("--in", stats.in, "JSONL shards (documents or segments)")->required();
    stats_cmd->add_option("--tokenizer", stats.tokenizer, "whitespace | subword:<vocab-path>")->capture_default_str();
    stats_cmd->add_option("--out", stats.out, "Markdown table (default stdout)");
    stats_cmd->add_option("--csv", stats.csv, "CSV table");

    EvalCommon ner;
    auto* ner_cmd = app.add_subcommand("eval-ner", "Span-level micro P/R/F1 from BIO tags");
    ner_cmd->add_option("--gold", ner.gold, "CoNLL TSV: token, gold[, pred]")->required();
    ner_cmd->add_option("--pred", ner.pred, "CoNLL TSV with predicted tags in the last column");
    ner_cmd->add_option("--out", ner.out, "MetricReport JSON");
    ner_cmd->add_option("--model", ner.model, "Model label stored in the report");
    ner_cmd->add_option("--task", ner.task, "Task label stored in the report");

    EvalCommon ml;
    double threshold = 0.5;
    auto* ml_cmd = app.add_subcommand("eval-multilabel", "Micro P/R/F1 over (document, label) pairs");
    ml_cmd->add_option("--gold", ml.gold, "Gold JSONL {id, labels}")->required();
    ml_cmd->add_option("--pred", ml.pred, "Prediction JSONL {id, scores}")->required();
    ml_cmd->add_option("--threshold", threshold, "Score threshold")->capture_default_str();
    ml_cmd->add_option("--out", ml.out, "MetricReport JSON");
    ml_cmd->add_option("--model", ml.model, "Model label stored in the report");
    ml_cmd->add_option("--task", ml.task, "Task label stored in the report");

    EvalCommon qa;
    std::string articles = "de";
    auto* qa_cmd = app.add_subcommand("eval-qa", "Token F1 and exact match for extractive QA");
    qa_cmd->add_option("--gold", qa.gold, "SQuAD-v1 style gold JSON")->required();
    qa_cmd->add_option("--pred", qa.pred, "Predictions JSON {question_id: answer}")->required();
    qa_cmd->add_option("--articles", articles, "Articles removed during normalization: de | en | none")->capture_default_str()
        ->check(CLI::IsMember({"de", "en", "none"}));
    qa_cmd->add_option("--out", qa.out, "MetricReport JSON");
    qa_cmd->add_option("--model", qa.model, "Model label stored in the report");
    qa_cmd->add_option("--task", qa.task, "Task label stored in the report");

    CvOptions cv;
    auto* cv_cmd = app.add_subcommand("cv-split", "Seeded k-fold document assignment");
    cv_cmd->add_option("--k", cv.k, "Number of folds")->capture_default_str();
    cv_cmd->add_option("--seed", cv.seed, "PRNG seed")->required();
    cv_cmd->add_option("--ids", cv.ids, "Document ids, one per line")->required();
    cv_cmd->add_option("--out", cv.out, "FoldAssignment JSON (default stdout)");

    ConfigOptions config;
    auto* config_cmd = app.add_subcommand("config", "Emit a fine-tuning configuration");
    config_cmd->add_option("--task", config.task, "BRONCO | GGPONC2 | GraSCCo | CLEF | RadQA")->required();
    config_cmd->add_option("--size", config.size, "base | large")->capture_default_str()->check(CLI::IsMember({"base", "large"}));
    config_cmd->add_option("--labels", config.labels, "Training label JSONL; adds positive class weights");
    config_cmd->add_option("--out", config.out, "key=value file (default stdout)");

    ReportOptions report;
    auto* report_cmd = app.add_subcommand("report", "Markdown comparison table from MetricReport files");
    report_cmd->add_option("files", report.in, "MetricReport JSON files")->required();
    report_cmd->add_option("--out", report.out, "Markdown output (default stdout)");

    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
    }

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        if (e.get_exit_code() != 0) {
            err << app.help();
        }
        return kExitUsage;
    }

    Context ctx{out, err, make_logger(err, log_level), args, workers, manifest};
    if (translate_cmd->parsed() && !in_flight_opt->count() && app.get_option("--workers")->count() && workers > 0) {
        translate.max_in_flight = static_cast<std::size_t>(workers);
    }
    try {
        if (ingest_cmd->parsed()) {
            return cmd_ingest(ingest, ctx);
        }
        if (filter_cmd->parsed()) {
            return cmd_filter(filter, ctx);
        }
        if (segment_cmd->parsed()) {
            return cmd_segment(segment, ctx);
        }
        if (translate_cmd->parsed()) {
            return cmd_translate(translate, ctx);
        }
        if (stats_cmd->parsed()) {
            return cmd_stats(stats, ctx);
        }
        if (ner_cmd->parsed()) {
            return cmd_eval_ner(ner, ctx);
        }
        if (ml_cmd->parsed()) {
            return cmd_eval_multilabel(ml, threshold, ctx);
        }
        if (qa_cmd->parsed()) {
            return cmd_eval_qa(qa, articles, ctx);
        }
        if (cv_cmd->parsed()) {
            return cmd_cv_split(cv, ctx);
        }
        if (config_cmd->parsed()) {
            return cmd_config(config, ctx);
        }
        if (report_cmd->parsed()) {
            return cmd_report(report, ctx);
        }
    } catch (const ConfigError& e) {
        ctx.log->error("{}", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        ctx.log->error("{}", e.what());
        return kExitDataError;
    }
    return kExitUsage;
}

}  // namespace medcorpus::cli
