#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hproj/bounds.hpp"
#include "hproj/dimension.hpp"
#include "hproj/fractal.hpp"

namespace hproj {

/// Shared knob set for all experiment drivers. Unused fields are ignored
/// by drivers that do not need them; the seed is echoed into every output.
struct ExperimentConfig {
    std::string experiment = "sweep";
    std::string generator = "cantor_vertical";  // cantor_vertical | product | ifs
    int n = 1;
    int m = 1;
    uint64_t seed = 1;
    int plane_samples = 20;
    int depth = 10;
    double alpha = 0.6309297535714574;  // log2/log3
    int levels = 6;
    double scale_lo = 0.0;  // 0 = choose from the data
    double scale_hi = 0.0;
    size_t pairs = 10000;
    size_t plane_mc = 10000;  // plane count for the kernel average
    int threads = 0;          // 0 = default_thread_count()

    static ExperimentConfig from_json(const std::string& text);
    std::string to_json() const;
};

/// A finished experiment: a JSON summary document plus named CSV tables
/// and SVG plots. File contents are pure functions of the config.
struct ExperimentReport {
    std::string name;
    std::string summary_json;
    std::vector<std::pair<std::string, std::string>> csv_files;  // stem -> content
    std::vector<std::pair<std::string, std::string>> svg_files;
};

ExperimentReport run_projection_sweep(const ExperimentConfig& cfg);
ExperimentReport run_kernel_inequality(const ExperimentConfig& cfg);
ExperimentReport run_transversality(const ExperimentConfig& cfg);
ExperimentReport run_grushin_isometry(const ExperimentConfig& cfg);
ExperimentReport run_slicing(const ExperimentConfig& cfg);
ExperimentReport run_bound_tables(const ExperimentConfig& cfg);
/// Scaled-down deterministic pass over every driver; used by the CLI
/// `selftest` subcommand and the byte-identity check.
ExperimentReport run_selftest(const ExperimentConfig& cfg);

/// Write <name>.json plus all csv/svg files into out_dir.
void emit(const ExperimentReport& report, const std::string& out_dir);

/// COSETLAB_THREADS if set and positive, else hardware concurrency.
int default_thread_count();

/// Static partition of [0, count) over the given thread count; tasks see
/// their own index, so results are schedule-independent.
void parallel_for(size_t count, int threads, const std::function<void(size_t)>& fn);

/// The example clouds used by the sweep drivers.
PointCloud sweep_cloud(const ExperimentConfig& cfg);

}  // namespace hproj
