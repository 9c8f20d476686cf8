#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "pairflow/checkpoint.hpp"
#include "pairflow/csv.hpp"
#include "pairflow/errors.hpp"
#include "pairflow/fourier.hpp"
#include "pairflow/runner.hpp"
#include "pairflow/structure.hpp"

namespace pairflow {

namespace fs = std::filesystem;

namespace {

bool wildcard_match(const char* pat, const char* str) {
  const char* star = nullptr;
  const char* resume = nullptr;
  while (*str) {
    if (*pat == *str) {
      ++pat;
      ++str;
    } else if (*pat == '*') {
      star = pat++;
      resume = str;
    } else if (star != nullptr) {
      pat = star + 1;
      str = ++resume;
    } else {
      return false;
    }
  }
  while (*pat == '*') ++pat;
  return *pat == '\0';
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  const fs::path p(pattern);
  if (pattern.find('*') == std::string::npos) {
    if (fs::exists(p)) return {pattern};
    return {};
  }
  const fs::path parent = p.parent_path().empty() ? "." : p.parent_path();
  const std::string name_pattern = p.filename().string();
  std::vector<std::string> out;
  if (!fs::is_directory(parent)) return out;
  for (const auto& entry : fs::directory_iterator(parent))
    if (entry.is_regular_file() &&
        wildcard_match(name_pattern.c_str(),
                       entry.path().filename().string().c_str()))
      out.push_back(entry.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

void write_table(const fs::path& path, const std::string& field,
                 const StructureFunctionTable& table) {
  CsvWriter csv(path.string(), {"field", "p", "l", "signed_S", "abs_S",
                                "count"});
  for (int p : table.orders())
    for (int m = 1; m <= table.separations(); ++m)
      csv.row()
          .cell(field)
          .cell(p)
          .cell(table.separation(m))
          .cell(table.signed_moment(p, m))
          .cell(table.abs_moment(p, m))
          .cell(table.count(m));
}

void write_fits(const fs::path& path, const StructureFunctionTable& table,
                const std::vector<int>& orders, double lmin, double lmax) {
  CsvWriter csv(path.string(), {"p", "zeta", "stderr", "intercept", "r2",
                                "points", "l_min", "l_max"});
  for (int p : orders) {
    const ScalingFit fit = fit_scaling(table, p, lmin, lmax);
    csv.row()
        .cell(fit.p)
        .cell(fit.zeta)
        .cell(fit.se)
        .cell(fit.intercept)
        .cell(fit.r2)
        .cell(fit.points)
        .cell(lmin)
        .cell(lmax);
  }
}

}  // namespace

void cmd_structure(const CliOptions& opts, const std::string& snapshot_glob) {
  const RunConfig run = load_run_config(opts);
  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);

  const std::vector<std::string> paths = expand_glob(snapshot_glob);
  if (paths.empty())
    throw ConfigError("no snapshots match '" + snapshot_glob + "'");

  const Checkpoint first = read_checkpoint(paths.front());
  const Lattice lattice(first.resolution, first.domain_size);
  const double lambda = first.lambda;
  FourierWorkspace fourier(lattice);

  StructureFunctionTable table_u(lattice, run.statistics.p_orders);
  StructureFunctionTable table_w(lattice, run.statistics.p_orders);
  std::vector<PhysicalField> w_snapshots;

  for (const std::string& path : paths) {
    const Checkpoint ckpt = read_checkpoint(path);
    if (ckpt.resolution != first.resolution ||
        ckpt.domain_size != first.domain_size)
      throw ConfigError("snapshot lattice mismatch in " + path);
    const PairState state = restore_state(ckpt, lattice);
    const PhysicalField pu = fourier.to_physical(state.u);
    const PhysicalField pw = fourier.to_physical(state.w);
    table_u.accumulate(pu);
    table_w.accumulate(pw);
    w_snapshots.push_back(pw);
  }

  write_table(dir / "structure_u.csv", "u", table_u);
  write_table(dir / "structure_w.csv", "w", table_w);

  const double h = lattice.length() / lattice.n();
  const double lmin =
      run.statistics.fit_lmin > 0.0 ? run.statistics.fit_lmin : 4.0 * h;
  const double lmax = run.statistics.fit_lmax > 0.0
                          ? run.statistics.fit_lmax
                          : lattice.n() * h / 8.0;

  if (lambda != 0.0) {
    const RescalingCheck check =
        rescaling_check(table_w, w_snapshots, lambda, 1e-12);
    CsvWriter csv((dir / "rescaling.csv").string(),
                  {"lambda", "max_rel_err", "status"});
    csv.row().cell(lambda).cell(check.max_rel_err).cell(check.pass);
    std::printf("rescaling check at lambda=%g: %s (max rel err %.3e)\n",
                lambda, check.pass ? "pass" : "FAIL", check.max_rel_err);
  }

  write_fits(dir / "zeta_u.csv", table_u, run.statistics.p_orders, lmin, lmax);
  write_fits(dir / "zeta_w.csv", table_w, run.statistics.p_orders, lmin, lmax);

  std::printf("structure tables from %zu snapshots written to %s\n",
              paths.size(), dir.string().c_str());
}

}  // namespace pairflow
