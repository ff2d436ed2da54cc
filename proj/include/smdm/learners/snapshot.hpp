#pragma once

#include <cstdint>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <string_view>

#include "smdm/learners/hoeffding.hpp"
#include "smdm/learners/majority.hpp"
#include "smdm/learners/naive_bayes.hpp"

namespace smdm {

enum class LearnerKind : std::uint8_t { majority = 0, naive_bayes = 1, hoeffding_tree = 2 };

inline const char* learner_kind_name(LearnerKind k) {
    switch (k) {
        case LearnerKind::majority: return "majority";
        case LearnerKind::naive_bayes: return "naive-bayes";
        case LearnerKind::hoeffding_tree: return "hoeffding-tree";
    }
    return "unknown";
}

inline LearnerKind parse_learner_kind(const std::string& name) {
    if (name == "majority") return LearnerKind::majority;
    if (name == "naive-bayes") return LearnerKind::naive_bayes;
    if (name == "hoeffding-tree") return LearnerKind::hoeffding_tree;
    fail(errc::usage_error, "unknown learner '" + name + "'");
}

inline std::unique_ptr<Classifier> make_classifier(LearnerKind kind, const DatasetSchema& schema,
                                                   HoeffdingParams params = {}) {
    switch (kind) {
        case LearnerKind::majority: return std::make_unique<MajorityClassifier>(schema);
        case LearnerKind::naive_bayes: return std::make_unique<NaiveBayesClassifier>(schema);
        case LearnerKind::hoeffding_tree:
            return std::make_unique<HoeffdingTreeClassifier>(schema, params);
    }
    fail(errc::usage_error, "unknown learner kind");
}

inline constexpr std::string_view kSnapshotMagic = "SMSN";
inline constexpr std::uint8_t kSnapshotVersion = 0x01;

// Snapshot layout: magic, version, learner kind, schema hash, model payload.
inline std::string snapshot_model(const Classifier& model, LearnerKind kind,
                                  const DatasetSchema& schema) {
    ByteWriter w;
    w.put_bytes(kSnapshotMagic);
    w.put_u8(kSnapshotVersion);
    w.put_u8(static_cast<std::uint8_t>(kind));
    w.put_u64(schema_hash(schema));
    model.save(w);
    return w.take();
}

struct LoadedModel {
    LearnerKind kind;
    std::unique_ptr<Classifier> model;
};

inline LoadedModel restore_model(std::string_view bytes, const DatasetSchema& schema,
                                 HoeffdingParams params = {}) {
    ByteReader r(bytes, errc::snapshot_error);
    if (r.get_bytes(4) != kSnapshotMagic) fail(errc::bad_magic, "not a model snapshot");
    std::uint8_t version = r.get_u8();
    if (version != kSnapshotVersion)
        fail(errc::unsupported_version, "snapshot version " + std::to_string(version));
    std::uint8_t kind_raw = r.get_u8();
    if (kind_raw > static_cast<std::uint8_t>(LearnerKind::hoeffding_tree))
        fail(errc::snapshot_error, "unknown learner kind " + std::to_string(kind_raw));
    LearnerKind kind = static_cast<LearnerKind>(kind_raw);
    std::uint64_t stored_hash = r.get_u64();
    if (stored_hash != schema_hash(schema))
        fail(errc::schema_mismatch, "snapshot was taken under a different schema");
    LoadedModel out{kind, make_classifier(kind, schema, params)};
    out.model->load(r);
    if (!r.exhausted()) fail(errc::snapshot_error, "trailing bytes after model payload");
    return out;
}

inline void write_snapshot_file(const std::string& path, const Classifier& model,
                                LearnerKind kind, const DatasetSchema& schema) {
    std::string bytes = snapshot_model(model, kind, schema);
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_failure, "cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(errc::io_failure, "short write to '" + path + "'");
}

inline LoadedModel read_snapshot_file(const std::string& path, const DatasetSchema& schema,
                                      HoeffdingParams params = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_failure, "cannot open '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return restore_model(bytes, schema, params);
}

} // namespace smdm
