#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "smdm/cli.hpp"

namespace {

char parse_delimiter(const std::string& s) {
    if (s.size() != 1) smdm::fail(smdm::errc::usage_error, "--delimiter must be one character");
    return s[0];
}

// Flags shared by every data-reading subcommand.
struct InputFlags {
    smdm::cli::InputOptions in;
    std::string delim{smdm::kDefaultDelimiter};

    void add_to(CLI::App* cmd, bool replay) {
        cmd->add_option("--schema", in.schema, "'builtin' or a schema file path")
            ->capture_default_str();
        cmd->add_option("--delimiter", delim, "field delimiter")->capture_default_str();
        cmd->add_option("--seed", in.seed, "seed for shuffle order and synthesis")
            ->capture_default_str();
        if (replay) {
            cmd->add_option("--input", in.input, "delimited record file");
            cmd->add_flag("--header", in.skip_header, "skip the first line of --input");
            cmd->add_option("--synth", in.synth,
                            "generate N synthetic campaign rows instead of reading --input");
            cmd->add_option("--noise", in.noise, "synthetic label noise, in [0,0.5)")
                ->capture_default_str();
            cmd->add_flag("--shuffle", in.shuffle, "replay records in seeded shuffled order");
            cmd->add_option("--limit", in.limit, "replay at most N records");
        }
    }

    smdm::cli::InputOptions resolve() {
        in.delimiter = parse_delimiter(delim);
        return in;
    }
};

void add_pipeline_flags(CLI::App* cmd, smdm::cli::TrainEvalOptions& o) {
    cmd->add_option("--learner", o.learner, "majority | naive-bayes | hoeffding-tree")
        ->capture_default_str();
    cmd->add_option("--grace-period", o.grace_period,
                    "hoeffding tree: instances between split attempts")
        ->capture_default_str();
    cmd->add_option("--delta", o.delta, "hoeffding tree: split confidence")
        ->capture_default_str();
    cmd->add_option("--tie-threshold", o.tie_threshold, "hoeffding tree: tie-break bound")
        ->capture_default_str();
    cmd->add_option("--parallelism", o.parallelism, "learner partition count")
        ->capture_default_str();
    cmd->add_option("--key", o.key,
                    "source→learner grouping: omit for shuffle, 'id', or an attribute name");
    cmd->add_option("--window", o.window, "sliding accuracy window size")
        ->capture_default_str();
    cmd->add_option("--metrics-every", o.metrics_every, "instances between metrics rows")
        ->capture_default_str();
    cmd->add_option("--peers", o.peers, "peer table file: 'worker_id host:port' per line");
    cmd->add_option("--connect-timeout-ms", o.connect_timeout_ms,
                    "distributed connect phase deadline")
        ->capture_default_str();
    cmd->add_option("--run-timeout-ms", o.run_timeout_ms, "distributed run deadline")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stream miner for direct-marketing response models"};
    app.require_subcommand(1);
    app.set_config("--config", "", "config file with 'key = value' lines, '#' comments");

    CLI::App* describe = app.add_subcommand("describe", "per-attribute data summary");
    InputFlags describe_in;
    describe_in.add_to(describe, true);
    describe->callback([&] {
        std::cout << smdm::cli::run_describe({describe_in.resolve()});
    });

    CLI::App* prepare =
        app.add_subcommand("prepare", "normalize sentinels, append feature columns");
    InputFlags prepare_in;
    prepare_in.add_to(prepare, true);
    smdm::cli::PrepareOptions prepare_o;
    prepare->add_option("--out", prepare_o.out_dir, "output directory")->capture_default_str();
    prepare->add_flag("--rfm", prepare_o.rfm, "append the bank RFM proxy columns");
    prepare->callback([&] {
        prepare_o.in = prepare_in.resolve();
        smdm::cli::run_prepare(prepare_o);
    });

    CLI::App* tev = app.add_subcommand("train-eval", "prequential train/evaluate over a stream");
    InputFlags tev_in;
    tev_in.add_to(tev, true);
    smdm::cli::TrainEvalOptions tev_o;
    add_pipeline_flags(tev, tev_o);
    tev->add_option("--engine", tev_o.engine, "local | distributed")->capture_default_str();
    tev->add_option("--out", tev_o.out_dir, "output directory")->capture_default_str();
    tev->callback([&] {
        tev_o.in = tev_in.resolve();
        smdm::cli::run_train_eval(tev_o);
    });

    CLI::App* target = app.add_subcommand("target", "score, rank and select with a saved model");
    InputFlags target_in;
    target_in.add_to(target, true);
    smdm::cli::TargetOptions target_o;
    target->add_option("--model", target_o.model, "model snapshot path");
    target->add_option("--fraction", target_o.fraction, "selected fraction, in (0,1]")
        ->capture_default_str();
    target->add_option("--deciles", target_o.deciles, "lift table bucket count")
        ->capture_default_str();
    target->add_option("--out", target_o.out_dir, "output directory")->capture_default_str();
    target->callback([&] {
        target_o.in = target_in.resolve();
        smdm::cli::run_target(target_o);
    });

    CLI::App* worker = app.add_subcommand("worker", "join a distributed run");
    InputFlags worker_in;
    worker_in.add_to(worker, false);
    smdm::cli::WorkerOptionsCli worker_o;
    add_pipeline_flags(worker, worker_o.base);
    worker->add_option("--id", worker_o.worker_id, "this worker's id in the peer table")
        ->required();
    worker->callback([&] {
        worker_o.base.in = worker_in.resolve();
        smdm::cli::run_worker_cmd(worker_o);
    });

    CLI::App* coord = app.add_subcommand("coordinate", "drive a distributed train-eval");
    InputFlags coord_in;
    coord_in.add_to(coord, true);
    smdm::cli::TrainEvalOptions coord_o;
    add_pipeline_flags(coord, coord_o);
    coord->add_option("--out", coord_o.out_dir, "output directory")->capture_default_str();
    coord->callback([&] {
        coord_o.in = coord_in.resolve();
        smdm::cli::run_coordinate(coord_o);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const smdm::Error& e) {
        std::cerr << "smdm: " << smdm::errc_name(e.code()) << ": " << e.what() << '\n';
        return smdm::cli::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "smdm: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
