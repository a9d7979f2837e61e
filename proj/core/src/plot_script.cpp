#include <fstream>
#include <sstream>

#include "cavity/errors.hpp"
#include "cavity/experiment.hpp"

namespace cavity {

namespace fs = std::filesystem;

PlotKind parse_plot_kind(std::string_view text) {
  if (text == "phase-diagram") return PlotKind::PhaseDiagram;
  if (text == "trajectory") return PlotKind::Trajectory;
  if (text == "selfavg") return PlotKind::SelfAveraging;
  throw ConfigError("unknown plot kind '" + std::string(text) + "'");
}

namespace {

std::string python_string(const std::string& s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\\' || ch == '\'') out.push_back('\\');
    out.push_back(ch);
  }
  return out + "'";
}

const char* kPreamble = R"PY(#!/usr/bin/env python3
import csv
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def load(name):
    with open(os.path.join(HERE, name), newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {key: [float(r[key]) for r in rows] for key in rows[0]} if rows else {}

)PY";

const char* kPhaseBody = R"PY(
for name in CSVS:
    d = load(name)
    beta, hc, flag = d["beta"], d["htilde_c"], d["beta_c_flag"]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(beta, hc, color="black", label="critical field")
    top = max(hc) * 1.1
    ax.set_ylim(0, top)
    crossing = next((b for b, f in zip(beta, flag) if f >= 1), None)
    if crossing is not None:
        ax.axvline(crossing, color="gray", linestyle="--", label="critical beta")
    mid = len(beta) // 2
    ax.text(beta[mid], min(hc[mid] + 0.25 * (top - hc[mid]), top * 0.95), "A", fontsize=14)
    left = beta[0] if crossing is None else 0.5 * (beta[0] + crossing)
    ax.text(left, 0.1 * top, "C", fontsize=14)
    if crossing is not None:
        ax.text(0.5 * (crossing + beta[-1]), 0.1 * top, "B", fontsize=14)
    ax.set_xlabel("beta")
    ax.set_ylabel("h / k")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, os.path.splitext(name)[0] + ".png"), dpi=150)
)PY";

const char* kTrajectoryBody = R"PY(
for name in CSVS:
    with open(os.path.join(HERE, name), newline="") as fh:
        rows = list(csv.DictReader(fh))
    step = [int(r["step"]) for r in rows]
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    top.plot(step, [float(r["energy"]) for r in rows], lw=0.8)
    top.set_ylabel("energy")
    bottom.plot(step, [int(r["overlap"]) for r in rows], lw=0.8, color="tab:orange")
    bottom.set_ylabel("overlap")
    bottom.set_xlabel("step")
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, os.path.splitext(name)[0] + ".png"), dpi=150)
)PY";

const char* kSelfAveragingBody = R"PY(
import math

for name in CSVS:
    d = load(name)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(d["k"], d["log_ratio"], "o-", label="ln(var Z / (E Z)^2)")
    ax.plot(d["k"], [math.log(r) for r in d["reference"]], "k--", label="ln n^-2")
    ax.set_xlabel("k")
    ax.set_ylabel("log ratio")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, os.path.splitext(name)[0] + ".png"), dpi=150)
)PY";

}  // namespace

void emit_plot_script(const std::vector<fs::path>& csv_paths, PlotKind kind,
                      const fs::path& script_path) {
  if (csv_paths.empty()) throw ConfigError("no CSV files given to the plot script");
  const fs::path base = script_path.has_parent_path() ? script_path.parent_path() : ".";
  std::ostringstream names;
  names << "CSVS = [";
  for (std::size_t i = 0; i < csv_paths.size(); ++i) {
    if (!fs::is_regular_file(csv_paths[i]))
      throw ConfigError("CSV file not found: " + csv_paths[i].string());
    const auto rel = fs::relative(csv_paths[i], base).generic_string();
    names << (i ? ", " : "") << python_string(rel);
  }
  names << "]\n";

  std::ofstream out(script_path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + script_path.string());
  out << kPreamble << names.str();
  switch (kind) {
    case PlotKind::PhaseDiagram: out << kPhaseBody; break;
    case PlotKind::Trajectory: out << kTrajectoryBody; break;
    case PlotKind::SelfAveraging: out << kSelfAveragingBody; break;
  }
  if (!out) throw ConfigError("write failed: " + script_path.string());
}

}  // namespace cavity
