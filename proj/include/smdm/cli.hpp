#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "smdm/engine_local.hpp"
#include "smdm/engine_net.hpp"
#include "smdm/pipeline.hpp"
#include "smdm/rfm.hpp"
#include "smdm/stream.hpp"
#include "smdm/synth.hpp"
#include "smdm/targeting.hpp"

namespace smdm::cli {

// Exit codes: 0 success, 1 usage/config, 2 data, 3 engine/runtime.
inline int exit_code_for(errc code) {
    switch (code) {
        case errc::usage_error:
            return 1;
        case errc::engine_failure:
        case errc::connection_lost:
        case errc::handshake_mismatch:
        case errc::timeout:
        case errc::cycle_detected:
        case errc::dangling_edge:
        case errc::duplicate_processor:
        case errc::unreachable_processor:
            return 3;
        default:
            return 2;
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_failure, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) fail(errc::io_failure, "read error on '" + path + "'");
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_failure, "cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(errc::io_failure, "short write to '" + path + "'");
}

// "builtin" (or empty) selects the bank-marketing schema; anything else is
// a schema file path.
inline DatasetSchema resolve_schema(const std::string& ref) {
    if (ref.empty() || ref == "builtin") return builtin_bank_marketing_schema();
    return parse_schema(read_file(ref), std::filesystem::path(ref).stem().string());
}

// Where the records come from and how they are replayed.
struct InputOptions {
    std::string schema = "builtin";
    std::string input;       // record file; unused when synth > 0
    std::uint64_t synth = 0; // generate this many synthetic campaign rows
    std::uint64_t seed = 1;
    double noise = 0.1; // synth label noise
    bool shuffle = false;
    std::uint64_t limit = 0; // 0 = all
    bool skip_header = false;
    char delimiter = kDefaultDelimiter;
};

inline std::vector<Instance> load_record_file(const std::string& path,
                                              const DatasetSchema& schema, char delimiter,
                                              bool skip_header) {
    std::ifstream in(path);
    if (!in) fail(errc::io_failure, "cannot open '" + path + "'");
    std::vector<Instance> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_header && line_no == 1) continue;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        try {
            out.push_back(parse_record(line, schema, delimiter));
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()) + " (line " + std::to_string(line_no) + ")",
                        e.detail_a(), static_cast<std::int64_t>(line_no));
        }
    }
    if (in.bad()) fail(errc::io_failure, "read error on '" + path + "'");
    return out;
}

inline std::vector<Instance> load_input(const InputOptions& in, const DatasetSchema& schema) {
    std::vector<Instance> records;
    if (in.synth > 0) {
        if (!schema.same_structure(builtin_bank_marketing_schema()))
            fail(errc::usage_error, "--synth generates bank-marketing rows; keep the builtin schema");
        records = synth_campaign_stream(in.synth, in.seed, in.noise);
    } else {
        if (in.input.empty())
            fail(errc::usage_error, "no input: pass a record file or --synth N");
        records = load_record_file(in.input, schema, in.delimiter, in.skip_header);
    }
    ReplayConfig rc;
    if (in.shuffle) rc.shuffle_seed = in.seed;
    if (in.limit > 0) rc.limit = in.limit;
    std::unique_ptr<InstanceStream> stream = make_vector_stream(std::move(records), rc);
    return drain(*stream);
}

// ---------------------------------------------------------------- describe

struct DescribeOptions {
    InputOptions in;
};

// One row per attribute: name, kind, then key=value summaries. The class
// attribute's row is the class balance.
inline std::string run_describe(const DescribeOptions& options) {
    DatasetSchema schema = resolve_schema(options.in.schema);
    std::vector<Instance> records = load_input(options.in, schema);
    char d = options.in.delimiter;

    std::string out;
    for (std::size_t i = 0; i < schema.attribute_count(); ++i) {
        const AttributeSpec& attr = schema.attributes[i];
        out += attr.name;
        out += d;
        if (i == schema.class_index) {
            std::vector<std::uint64_t> counts(attr.domain.size(), 0);
            std::uint64_t labeled = 0;
            for (const Instance& r : records)
                if (r.labeled()) {
                    counts.at(*r.label) += 1;
                    ++labeled;
                }
            out += "class";
            out += d;
            out += "count=" + std::to_string(labeled);
            out += d;
            out += "missing=" + std::to_string(records.size() - labeled);
            for (std::size_t v = 0; v < attr.domain.size(); ++v) {
                out += d;
                out += attr.domain[v] + "=" + std::to_string(counts[v]);
            }
        } else if (attr.kind == AttrKind::numeric) {
            GaussianStats stats;
            double lo = 0.0, hi = 0.0;
            std::uint64_t missing = 0;
            for (const Instance& r : records) {
                const Cell& c = r.cells[i];
                if (!c.is_numeric()) {
                    ++missing;
                    continue;
                }
                if (stats.count == 0.0 || c.num < lo) lo = c.num;
                if (stats.count == 0.0 || c.num > hi) hi = c.num;
                stats.add(c.num);
            }
            out += "numeric";
            out += d;
            out += "count=" + std::to_string(static_cast<std::uint64_t>(stats.count));
            out += d;
            out += "missing=" + std::to_string(missing);
            out += d;
            out += "min=" + (stats.count > 0 ? detail::render_double(lo) : std::string());
            out += d;
            out += "max=" + (stats.count > 0 ? detail::render_double(hi) : std::string());
            out += d;
            out += "mean=" + (stats.count > 0 ? detail::render_double(stats.mean) : std::string());
            out += d;
            out += "stddev=" +
                   (stats.count > 0 ? detail::render_double(stats.stddev()) : std::string());
        } else {
            std::vector<std::uint64_t> counts(attr.domain.size(), 0);
            std::uint64_t missing = 0;
            for (const Instance& r : records) {
                const Cell& c = r.cells[i];
                if (c.is_categorical())
                    counts.at(c.cat) += 1;
                else
                    ++missing;
            }
            std::uint64_t present = records.size() - missing;
            out += "categorical";
            out += d;
            out += "count=" + std::to_string(present);
            out += d;
            out += "missing=" + std::to_string(missing);
            for (std::size_t v = 0; v < attr.domain.size(); ++v) {
                out += d;
                out += attr.domain[v] + "=" + std::to_string(counts[v]);
            }
        }
        out += '\n';
    }
    return out;
}

// ----------------------------------------------------------------- prepare

struct PrepareOptions {
    InputOptions in;
    std::string out_dir = ".";
    bool rfm = false;
};

inline constexpr std::string_view kPreparedData = "prepared.csv";
inline constexpr std::string_view kPreparedSchema = "prepared.schema";

// Applies the pdays sentinel rule, materializes the never_contacted flag
// as a column, and optionally appends the RFM proxy columns. Running it on
// its own output is a no-op (idempotent).
inline void run_prepare(const PrepareOptions& options) {
    DatasetSchema schema = resolve_schema(options.in.schema);
    std::vector<Instance> records = load_input(options.in, schema);

    std::optional<std::size_t> pdays = schema.find_attribute("pdays");
    bool has_pdays = pdays && schema.attributes[*pdays].kind == AttrKind::numeric;
    std::optional<std::size_t> marker_in = schema.find_attribute("never_contacted");
    bool had_rfm = schema.find_attribute("rfm_r").has_value();
    bool compute_rfm_cols = options.rfm && !had_rfm;
    if (compute_rfm_cols && !schema.same_structure(builtin_bank_marketing_schema()))
        fail(errc::schema_mismatch, "RFM proxy columns need the built-in bank schema");

    DatasetSchema out_schema = schema;
    out_schema.declared_instance_count.reset();
    out_schema.declared_attribute_count.reset();
    if (has_pdays && !marker_in)
        out_schema.attributes.push_back(
            {"never_contacted", AttrKind::categorical, {"0", "1"}, ""});
    if (compute_rfm_cols) {
        out_schema.attributes.push_back({"rfm_r", AttrKind::numeric, {}, ""});
        out_schema.attributes.push_back({"rfm_f", AttrKind::numeric, {}, ""});
        out_schema.attributes.push_back({"rfm_m", AttrKind::numeric, {}, ""});
    }
    validate_schema(out_schema);
    std::optional<std::size_t> marker_out = out_schema.find_attribute("never_contacted");

    std::string data;
    for (const Instance& rec : records) {
        Instance row = rec;
        if (has_pdays) row = normalize_pdays(std::move(row), schema);
        if (marker_in) {
            const Cell& c = row.cells[*marker_in];
            if (c.is_categorical() && c.cat == 1) row.flags |= kFlagNeverContacted;
        }
        RFMVector rfm;
        if (compute_rfm_cols) rfm = bank_rfm_proxy(row, schema);

        row.cells.resize(out_schema.attribute_count(), Cell::missing());
        if (marker_out)
            row.cells[*marker_out] =
                Cell::category(row.has_flag(kFlagNeverContacted) ? 1 : 0);
        if (compute_rfm_cols) {
            std::size_t base = out_schema.attribute_count() - 3;
            if (rfm.recency)
                row.cells[base] = Cell::number(static_cast<double>(*rfm.recency));
            row.cells[base + 1] = Cell::number(static_cast<double>(rfm.frequency));
            if (rfm.monetary) row.cells[base + 2] = Cell::number(*rfm.monetary);
        }
        data += render_record(row, out_schema, options.in.delimiter);
        data += '\n';
    }

    std::filesystem::create_directories(options.out_dir);
    std::filesystem::path dir(options.out_dir);
    write_file((dir / kPreparedData).string(), data);
    write_file((dir / kPreparedSchema).string(), render_schema(out_schema));
}

// --------------------------------------------------------------- train-eval

struct TrainEvalOptions {
    InputOptions in;
    std::string learner = "naive-bayes";
    std::uint32_t grace_period = 200;
    double delta = 1e-7;
    double tie_threshold = 0.05;
    std::uint16_t parallelism = 1;
    std::string key; // "" = shuffle, "id" = key(id), else key(attribute)
    std::uint64_t window = kDefaultWindow;
    std::uint64_t metrics_every = 1000;
    std::string engine = "local"; // or "distributed"
    std::string peers; // peer-table path, distributed only
    std::string out_dir = ".";
    std::uint64_t connect_timeout_ms = 10000;
    std::uint64_t run_timeout_ms = 60000;
};

inline constexpr std::string_view kMetricsFile = "metrics.txt";
inline constexpr std::string_view kConfusionFile = "confusion.txt";
inline constexpr std::string_view kModelFile = "model.bin";

inline PipelineOptions pipeline_options(const TrainEvalOptions& options) {
    PipelineOptions p;
    p.learner = parse_learner_kind(options.learner);
    p.hoeffding = {options.grace_period, options.delta, options.tie_threshold};
    p.learner_parallelism = options.parallelism;
    if (options.key.empty()) {
        p.grouping = Grouping::shuffle;
    } else if (options.key == "id") {
        p.grouping = Grouping::key_id;
    } else {
        p.grouping = Grouping::key_attribute;
        p.key_attribute = options.key;
    }
    p.window = options.window;
    p.metrics_every = options.metrics_every;
    p.delimiter = options.in.delimiter;
    return p;
}

inline NetOptions net_options(const TrainEvalOptions& options) {
    NetOptions n;
    n.connect_timeout = std::chrono::milliseconds(options.connect_timeout_ms);
    n.run_timeout = std::chrono::milliseconds(options.run_timeout_ms);
    return n;
}

inline void run_train_eval(const TrainEvalOptions& options) {
    DatasetSchema schema = resolve_schema(options.in.schema);
    std::vector<Instance> records = load_input(options.in, schema);
    PipelineOptions popt = pipeline_options(options);
    Topology topo = build_standard_topology(schema, popt);
    std::map<std::string, std::vector<Instance>> sources;
    sources.emplace("source", std::move(records));

    RunResult result;
    if (options.engine == "local") {
        result = run_local(topo, sources);
    } else if (options.engine == "distributed") {
        if (options.peers.empty())
            fail(errc::usage_error, "the distributed engine needs --peers <file>");
        PeerTable peers = parse_peer_table(read_file(options.peers));
        result = run_coordinator(topo, schema_hash(schema), sources, peers,
                                 net_options(options));
    } else {
        fail(errc::usage_error, "unknown engine '" + options.engine + "'");
    }

    std::filesystem::create_directories(options.out_dir);
    std::filesystem::path dir(options.out_dir);
    EvaluatorReport report =
        EvaluatorReport::parse(result.state_of(topo, evaluator_processor_name(popt)));
    write_file((dir / kMetricsFile).string(), report.metrics);
    write_file((dir / kConfusionFile).string(),
               render_confusion_matrix(report.matrix, schema.class_attribute().domain,
                                       options.in.delimiter));
    std::string learner_name = learner_processor_name(popt);
    for (std::uint16_t p = 0; p < popt.learner_parallelism; ++p) {
        std::string file = (p == 0) ? std::string(kModelFile)
                                    : "model." + std::to_string(p) + ".bin";
        write_file((dir / file).string(), result.state_of(topo, learner_name, p));
    }
}

// ------------------------------------------------------------------ target

struct TargetOptions {
    InputOptions in;
    std::string model; // snapshot path
    double fraction = 0.1;
    std::uint64_t deciles = 10;
    std::string out_dir = ".";
};

inline constexpr std::string_view kRankingFile = "ranking.txt";
inline constexpr std::string_view kLiftFile = "lift.txt";

inline void run_target(const TargetOptions& options) {
    DatasetSchema schema = resolve_schema(options.in.schema);
    std::vector<Instance> records = load_input(options.in, schema);
    if (options.model.empty()) fail(errc::usage_error, "--model <snapshot> is required");
    LoadedModel loaded = read_snapshot_file(options.model, schema);
    std::uint16_t positive = positive_class_index(schema);

    std::vector<ScoredRecord> scored;
    scored.reserve(records.size());
    bool all_labeled = true;
    for (std::size_t i = 0; i < records.size(); ++i) {
        std::vector<double> dist = loaded.model->predict(records[i]);
        ScoredRecord s{i + 1, dist.at(positive), std::nullopt};
        if (records[i].labeled())
            s.positive = (*records[i].label == positive);
        else
            all_labeled = false;
        scored.push_back(s);
    }
    if (!all_labeled) // lift needs every outcome; rank without it
        for (ScoredRecord& s : scored) s.positive.reset();

    TargetingReport report =
        make_targeting_report(scored, options.fraction, options.deciles);
    std::filesystem::create_directories(options.out_dir);
    std::filesystem::path dir(options.out_dir);
    write_file((dir / kRankingFile).string(),
               render_targeting_rows(report, options.in.delimiter));
    if (report.lift) write_file((dir / kLiftFile).string(), render_lift_table(*report.lift));
}

// ------------------------------------------------------- worker / coordinate

struct WorkerOptionsCli {
    TrainEvalOptions base; // schema + pipeline settings; input/out unused
    std::uint16_t worker_id = 0;
};

inline void run_worker_cmd(const WorkerOptionsCli& options) {
    DatasetSchema schema = resolve_schema(options.base.in.schema);
    Topology topo = build_standard_topology(schema, pipeline_options(options.base));
    if (options.base.peers.empty())
        fail(errc::usage_error, "a worker needs --peers <file>");
    PeerTable peers = parse_peer_table(read_file(options.base.peers));
    run_worker(topo, schema_hash(schema), options.worker_id, peers,
               net_options(options.base));
}

inline void run_coordinate(TrainEvalOptions options) {
    options.engine = "distributed";
    run_train_eval(options);
}

} // namespace smdm::cli
