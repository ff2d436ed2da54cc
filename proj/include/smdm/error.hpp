#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace smdm {

// Every failure the library reports, one code per contract violation.
enum class errc {
    // schema / ingestion
    duplicate_attribute,
    empty_domain,
    missing_class_declaration,
    malformed_line,
    arity_mismatch,
    unknown_category,
    unparseable_numeric,
    no_such_attribute,
    schema_mismatch,
    io_failure,
    // rfm
    future_transaction,
    degenerate_quantiles,
    // learners
    unlabeled_instance,
    domain_error,
    count_mismatch,
    snapshot_error,
    // evaluation / targeting
    empty_matrix,
    empty_input,
    bad_fraction,
    no_positives,
    too_few_records,
    // topology / engine
    cycle_detected,
    dangling_edge,
    duplicate_processor,
    unreachable_processor,
    bad_magic,
    unsupported_version,
    truncated_frame,
    malformed_payload,
    connection_lost,
    handshake_mismatch,
    timeout,
    engine_failure,
    // cli
    usage_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::duplicate_attribute: return "DuplicateAttribute";
        case errc::empty_domain: return "EmptyDomain";
        case errc::missing_class_declaration: return "MissingClassDeclaration";
        case errc::malformed_line: return "MalformedLine";
        case errc::arity_mismatch: return "ArityMismatch";
        case errc::unknown_category: return "UnknownCategory";
        case errc::unparseable_numeric: return "UnparseableNumeric";
        case errc::no_such_attribute: return "NoSuchAttribute";
        case errc::schema_mismatch: return "SchemaMismatch";
        case errc::io_failure: return "IoFailure";
        case errc::future_transaction: return "FutureTransaction";
        case errc::degenerate_quantiles: return "DegenerateQuantiles";
        case errc::unlabeled_instance: return "UnlabeledInstance";
        case errc::domain_error: return "DomainError";
        case errc::count_mismatch: return "CountMismatch";
        case errc::snapshot_error: return "SnapshotError";
        case errc::empty_matrix: return "EmptyMatrix";
        case errc::empty_input: return "EmptyInput";
        case errc::bad_fraction: return "BadFraction";
        case errc::no_positives: return "NoPositives";
        case errc::too_few_records: return "TooFewRecords";
        case errc::cycle_detected: return "CycleDetected";
        case errc::dangling_edge: return "DanglingEdge";
        case errc::duplicate_processor: return "DuplicateProcessor";
        case errc::unreachable_processor: return "UnreachableProcessor";
        case errc::bad_magic: return "BadMagic";
        case errc::unsupported_version: return "UnsupportedVersion";
        case errc::truncated_frame: return "TruncatedFrame";
        case errc::malformed_payload: return "MalformedPayload";
        case errc::connection_lost: return "ConnectionLost";
        case errc::handshake_mismatch: return "HandshakeMismatch";
        case errc::timeout: return "Timeout";
        case errc::engine_failure: return "EngineFailure";
        case errc::usage_error: return "UsageError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(errc code, std::string message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Error(errc code, std::string message, std::int64_t a, std::int64_t b = 0)
        : Error(code, std::move(message)) {
        a_ = a;
        b_ = b;
    }

    errc code() const noexcept { return code_; }

    // Numeric context, meaning depends on the code (expected/got, line number, ...).
    std::int64_t detail_a() const noexcept { return a_; }
    std::int64_t detail_b() const noexcept { return b_; }

private:
    errc code_;
    std::int64_t a_ = 0;
    std::int64_t b_ = 0;
};

[[noreturn]] inline void fail(errc code, std::string message) {
    throw Error(code, std::move(message));
}

[[noreturn]] inline void fail(errc code, std::string message, std::int64_t a, std::int64_t b = 0) {
    throw Error(code, std::move(message), a, b);
}

} // namespace smdm
