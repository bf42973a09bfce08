#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "alim/adaptive_lambda.hpp"
#include "alim/alim_core.hpp"
#include "alim/datagen.hpp"
#include "alim/io.hpp"
#include "alim/model.hpp"
#include "alim/oracle.hpp"
#include "alim/rng.hpp"
#include "alim/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitIo = 3;

struct LambdaSpec {
    std::string text = "fixed:0";
    alim::LambdaPolicy parse() const {
        auto colon = text.find(':');
        std::string head = text.substr(0, colon);
        double value = colon == std::string::npos ? 0.0 : std::stod(text.substr(colon + 1));
        if (head == "fixed") {
            if (value < 0.0 || value > 1.0) throw CLI::ValidationError("--lambda fixed value must be in [0,1]");
            return alim::LambdaPolicy::fixed(value);
        }
        if (head == "adaptive") {
            if (value < 0.0 || value > 1.0) throw CLI::ValidationError("--lambda adaptive eta must be in [0,1]");
            return alim::LambdaPolicy::adaptive(value);
        }
        throw CLI::ValidationError("--lambda must be fixed:<v> or adaptive:<eta>");
    }
};

struct NormSpec {
    std::string text = "scale:1.0";
    alim::Normalization parse() const {
        auto colon = text.find(':');
        std::string head = text.substr(0, colon);
        if (head == "onehot") return alim::Normalization::onehot();
        if (head == "scale") {
            double k = colon == std::string::npos ? 1.0 : std::stod(text.substr(colon + 1));
            if (!(k > 0.0)) throw CLI::ValidationError("--norm scale K must be positive");
            return alim::Normalization::scale(k);
        }
        throw CLI::ValidationError("--norm must be onehot or scale:<K>");
    }
};

struct ArchSpec {
    std::string text = "mlp:32";
    alim::ModelParams build(int in_dim, int classes, std::uint64_t seed) const {
        auto colon = text.find(':');
        std::string head = text.substr(0, colon);
        if (head == "linear") return alim::ModelParams::make_linear(in_dim, classes, seed);
        if (head == "mlp") {
            int hidden = colon == std::string::npos ? 32 : std::stoi(text.substr(colon + 1));
            if (hidden < 1) throw CLI::ValidationError("--arch mlp hidden size must be positive");
            return alim::ModelParams::make_mlp(in_dim, hidden, classes, seed);
        }
        throw CLI::ValidationError("--arch must be linear or mlp:<hidden>");
    }
};

// Everything a train/sweep run needs, serializable so dumped effective
// configs reload into identical runs.
struct TrainCli {
    std::string train_path, test_path, out_dir = ".";
    LambdaSpec lambda;
    NormSpec norm;
    ArchSpec arch;
    int e0 = 80;
    int epochs = 200;
    int batch = 64;
    bool mixup = true;
    bool mixup_during_warmup = false;
    double zeta = 4.0;
    double lambda_mix = 1.0;
    double lr = 0.01;
    double momentum = 0.9;
    double weight_decay = 0.001;
    std::uint64_t seed = 0;

    alim::TrainConfig to_config() const {
        alim::TrainConfig cfg;
        cfg.warmup_epochs = e0;
        cfg.epochs = epochs;
        cfg.batch_size = batch;
        cfg.lambda_policy = lambda.parse();
        cfg.norm = norm.parse();
        cfg.mixup = mixup;
        cfg.mixup_during_warmup = mixup_during_warmup;
        cfg.zeta = zeta;
        cfg.lambda_mix = lambda_mix;
        cfg.base_lr = lr;
        cfg.momentum = momentum;
        cfg.weight_decay = weight_decay;
        cfg.seed = seed;
        return cfg;
    }

    json to_json() const {
        return {{"train", train_path},
                {"test", test_path},
                {"out", out_dir},
                {"lambda", lambda.text},
                {"norm", norm.text},
                {"arch", arch.text},
                {"e0", e0},
                {"epochs", epochs},
                {"batch", batch},
                {"mixup", mixup},
                {"mixup_during_warmup", mixup_during_warmup},
                {"zeta", zeta},
                {"lambda_mix", lambda_mix},
                {"lr", lr},
                {"momentum", momentum},
                {"weight_decay", weight_decay},
                {"seed", seed}};
    }

    void from_json(const json& j) {
        train_path = j.value("train", train_path);
        test_path = j.value("test", test_path);
        out_dir = j.value("out", out_dir);
        lambda.text = j.value("lambda", lambda.text);
        norm.text = j.value("norm", norm.text);
        arch.text = j.value("arch", arch.text);
        e0 = j.value("e0", e0);
        epochs = j.value("epochs", epochs);
        batch = j.value("batch", batch);
        mixup = j.value("mixup", mixup);
        mixup_during_warmup = j.value("mixup_during_warmup", mixup_during_warmup);
        zeta = j.value("zeta", zeta);
        lambda_mix = j.value("lambda_mix", lambda_mix);
        lr = j.value("lr", lr);
        momentum = j.value("momentum", momentum);
        weight_decay = j.value("weight_decay", weight_decay);
        seed = j.value("seed", seed);
    }
};

void add_train_flags(CLI::App* cmd, TrainCli& opt, bool require_paths) {
    auto* train = cmd->add_option("--train", opt.train_path, "Training corpus file");
    auto* test = cmd->add_option("--test", opt.test_path, "Test corpus file");
    if (require_paths) {
        train->check(CLI::ExistingFile);
        test->check(CLI::ExistingFile);
    }
    cmd->add_option("--out", opt.out_dir, "Output directory");
    cmd->add_option("--lambda", opt.lambda.text, "fixed:<v> or adaptive:<eta>");
    cmd->add_option("--norm", opt.norm.text, "onehot or scale:<K>");
    cmd->add_option("--arch", opt.arch.text, "linear or mlp:<hidden>");
    cmd->add_option("--e0", opt.e0, "Warm-up epochs")->check(CLI::NonNegativeNumber);
    cmd->add_option("--epochs", opt.epochs, "Total epochs")->check(CLI::PositiveNumber);
    cmd->add_option("--batch", opt.batch, "Batch size")->check(CLI::PositiveNumber);
    cmd->add_flag("--mixup,!--no-mixup", opt.mixup, "Enable mixup training");
    cmd->add_flag("--mixup-during-warmup", opt.mixup_during_warmup,
                  "Apply mixup in warm-up epochs too");
    cmd->add_option("--zeta", opt.zeta, "Beta(zeta,zeta) mixup parameter");
    cmd->add_option("--lambda-mix", opt.lambda_mix, "Mixup loss weight");
    cmd->add_option("--lr", opt.lr, "Base learning rate");
    cmd->add_option("--momentum", opt.momentum, "SGD momentum");
    cmd->add_option("--wd", opt.weight_decay, "Weight decay");
    cmd->add_option("--seed", opt.seed, "Run seed");
}

// Config-file precedence: flags > config keys > defaults. The config file is
// applied before CLI11 parses, so explicit flags win.
void preload_config(int argc, char** argv, TrainCli& opt) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw std::runtime_error(std::string("cannot open config ") + argv[i + 1]);
            json j;
            in >> j;
            opt.from_json(j);
        }
    }
}

double run_training(const TrainCli& opt, const std::string& metrics_name,
                    const std::string& checkpoint_name, bool write_effective) {
    auto [train, train_spec] = alim::read_corpus(opt.train_path);
    auto [test, test_spec] = alim::read_corpus(opt.test_path);
    if (train_spec.c != test_spec.c)
        throw std::runtime_error("train/test class counts disagree");
    int d = static_cast<int>(train.front().features.size());

    alim::TrainConfig cfg = opt.to_config();
    alim::ModelParams model = opt.arch.build(d, train_spec.c, cfg.seed);
    auto metrics = alim::run_experiment(train, test, cfg, model);

    fs::create_directories(opt.out_dir);
    alim::write_metrics((fs::path(opt.out_dir) / metrics_name).string(), metrics);
    alim::save_checkpoint(model, (fs::path(opt.out_dir) / checkpoint_name).string());
    if (write_effective) {
        std::ofstream out(fs::path(opt.out_dir) / "effective_config.json");
        out << opt.to_json().dump(2) << "\n";
    }
    return metrics.back().test_accuracy;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ALIM noisy partial-label learning toolkit"};
    app.require_subcommand(1);

    // ---- gen ----------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "Generate a corrupted train/test corpus");
    int gen_n = 4000, gen_n_test = 1000, gen_c = 4, gen_d = 2;
    double gen_q = 0.3, gen_eta = 0.3, gen_spread = 0.5;
    std::uint64_t gen_seed = 0;
    std::string gen_out = "data";
    gen->add_option("--n", gen_n, "Training samples")->check(CLI::PositiveNumber);
    gen->add_option("--n-test", gen_n_test, "Test samples")->check(CLI::PositiveNumber);
    gen->add_option("--c", gen_c, "Class count")->check(CLI::Range(2, 1000));
    gen->add_option("--d", gen_d, "Feature dimension")->check(CLI::PositiveNumber);
    gen->add_option("--q", gen_q, "Ambiguity level")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--eta", gen_eta, "Noise level")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--spread", gen_spread, "Gaussian blob spread");
    gen->add_option("--seed", gen_seed, "Corpus seed");
    gen->add_option("--out", gen_out, "Output directory");

    // ---- train --------------------------------------------------------
    auto* train_cmd = app.add_subcommand("train", "Run one training experiment");
    TrainCli train_opt;
    std::string config_path;
    try {
        preload_config(argc, argv, train_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    add_train_flags(train_cmd, train_opt, /*require_paths=*/false);
    train_cmd->add_option("--config", config_path, "JSON config file (flags override)");

    // ---- verify -------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "Run the brute-force oracle suite");
    int verify_trials = 1000;
    std::uint64_t verify_seed = 7;
    double verify_grid_res = 1e-2;
    int verify_c = 3;
    verify->add_option("--trials", verify_trials, "Random trials per check")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", verify_seed, "Oracle seed");
    verify->add_option("--grid-res", verify_grid_res, "Simplex grid resolution");
    verify->add_option("--c", verify_c, "Class count for grid checks")->check(CLI::Range(2, 4));

    // ---- sweep --------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "Fixed-lambda grid plus the adaptive run");
    TrainCli sweep_opt;
    double sweep_eta = 0.3;
    add_train_flags(sweep, sweep_opt, /*require_paths=*/false);
    sweep->add_option("--eta", sweep_eta, "Noise level for the adaptive run")
        ->check(CLI::Range(0.0, 1.0));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) {
            auto train_pts = alim::make_gaussian_blobs(gen_n, gen_c, gen_d, gen_spread, gen_seed);
            auto test_pts =
                alim::make_gaussian_blobs(gen_n_test, gen_c, gen_d, gen_spread, gen_seed + 1);
            alim::CorruptionSpec spec{gen_c, gen_q, gen_eta, gen_seed};
            alim::CorruptionSpec test_spec{gen_c, gen_q, gen_eta, gen_seed + 1};
            auto train_samples = alim::corrupt(train_pts, spec);
            auto test_samples = alim::corrupt(test_pts, test_spec);

            fs::create_directories(gen_out);
            alim::write_corpus((fs::path(gen_out) / "train.ndjson").string(), train_samples,
                               gen_d, spec);
            alim::write_corpus((fs::path(gen_out) / "test.ndjson").string(), test_samples,
                               gen_d, test_spec);
            auto stats = alim::validate_corpus(train_samples, spec);
            alim::write_stats((fs::path(gen_out) / "stats.json").string(), stats);
            std::cout << "wrote " << train_samples.size() << " train / " << test_samples.size()
                      << " test samples to " << gen_out << "\n"
                      << "mean candidate size " << stats.mean_candidate_size << " (expected "
                      << stats.expected_candidate_size << "), noise fraction "
                      << stats.noise_fraction << " (expected " << stats.expected_noise_fraction
                      << ")\n";
            if (!stats.candidate_size_ok || !stats.noise_fraction_ok) {
                std::cerr << "warning: corpus statistics outside 3-sigma bounds\n";
            }
            return kExitOk;
        }

        if (*train_cmd) {
            if (train_opt.train_path.empty() || train_opt.test_path.empty()) {
                std::cerr << "error: --train and --test are required (flag or config)\n";
                return kExitUsage;
            }
            double acc = run_training(train_opt, "metrics.ndjson", "checkpoint.json", true);
            std::cout << "final test accuracy " << acc << "\n";
            return kExitOk;
        }

        if (*verify) {
            bool ok = true;

            auto reports = alim::verify_rc_degeneration(verify_trials, verify_seed);
            double worst = 0.0;
            for (const auto& r : reports) worst = std::max(worst, r.max_abs_deviation);
            bool rc_ok = worst < 1e-15;
            std::cout << "rc_degeneration trials=" << verify_trials << " max_dev=" << worst
                      << (rc_ok ? " PASS" : " FAIL") << "\n";
            ok = ok && rc_ok;

            // closed form vs grid oracle
            auto rng = alim::substream(verify_seed, 999);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            std::uniform_real_distribution<double> m_dist(0.1, 3.0);
            double grid_worst = 0.0;
            int grid_trials = std::min(verify_trials, 25);
            for (int t = 0; t < grid_trials; ++t) {
                alim::Vec p(static_cast<std::size_t>(verify_c));
                double sum = 0.0;
                for (double& v : p) {
                    v = -std::log(std::max(unit(rng), 1e-300));
                    sum += v;
                }
                for (double& v : p) v /= sum;
                alim::Mask s(static_cast<std::size_t>(verify_c), 0);
                bool any = false;
                for (auto& v : s) {
                    v = unit(rng) < 0.5 ? 1 : 0;
                    any = any || v;
                }
                if (!any) s[0] = 1;
                double m = m_dist(rng);
                double k = 0.5 + (t % 3) * 0.75;
                auto grid = alim::brute_force_argmax(p, s, m, k, verify_grid_res);
                auto closed = alim::closed_form_scale(p, s, m, k);
                for (std::size_t i = 0; i < p.size(); ++i)
                    grid_worst = std::max(grid_worst, std::abs(grid[i] - closed[i]));
                double gap = alim::objective_value(closed, p, s, m, k) -
                             alim::objective_value(grid, p, s, m, k);
                if (gap < -1e-9 || gap > 10 * verify_grid_res) ok = false;
            }
            bool grid_ok = grid_worst < 1e-2;
            std::cout << "closed_form_vs_grid trials=" << grid_trials
                      << " res=" << verify_grid_res << " max_label_dev=" << grid_worst
                      << (grid_ok ? " PASS" : " FAIL") << "\n";
            ok = ok && grid_ok;

            if (!ok) {
                std::cerr << "oracle verification FAILED\n";
                return kExitVerifyFailed;
            }
            std::cout << "all oracle checks passed\n";
            return kExitOk;
        }

        if (*sweep) {
            if (sweep_opt.train_path.empty() || sweep_opt.test_path.empty()) {
                std::cerr << "error: --train and --test are required\n";
                return kExitUsage;
            }
            const std::vector<double> grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.7};
            fs::create_directories(sweep_opt.out_dir);
            std::ofstream table(fs::path(sweep_opt.out_dir) / "sweep.tsv");
            table << "policy\tfinal_accuracy\n";
            std::cout << "policy\tfinal_accuracy\n";
            for (double lambda : grid) {
                TrainCli run = sweep_opt;
                run.lambda.text = "fixed:" + std::to_string(lambda);
                run.out_dir = (fs::path(sweep_opt.out_dir) /
                               ("fixed_" + std::to_string(lambda)))
                                  .string();
                double acc = run_training(run, "metrics.ndjson", "checkpoint.json", true);
                table << "fixed:" << lambda << "\t" << acc << "\n";
                std::cout << "fixed:" << lambda << "\t" << acc << "\n";
            }
            TrainCli adaptive = sweep_opt;
            adaptive.lambda.text = "adaptive:" + std::to_string(sweep_eta);
            adaptive.out_dir = (fs::path(sweep_opt.out_dir) / "adaptive").string();
            double acc = run_training(adaptive, "metrics.ndjson", "checkpoint.json", true);
            table << "adaptive:" << sweep_eta << "\t" << acc << "\n";
            std::cout << "adaptive:" << sweep_eta << "\t" << acc << "\n";
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
