#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lfot {

// Weighted point cloud; weights sum to one.
struct DiscreteMeasure {
  std::vector<std::vector<double>> atoms;
  std::vector<double> weights;

  int size() const { return static_cast<int>(atoms.size()); }
  int dim() const { return atoms.empty() ? 0 : static_cast<int>(atoms.front().size()); }

  void validate() const {
    if (atoms.size() != weights.size())
      throw std::invalid_argument("DiscreteMeasure: atoms/weights size mismatch");
    double s = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("DiscreteMeasure: negative weight");
      s += w;
    }
    if (std::fabs(s - 1.0) > 1e-12)
      throw std::invalid_argument("DiscreteMeasure: weights must sum to 1");
    for (size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i].size() != atoms.front().size())
        throw std::invalid_argument("DiscreteMeasure: inconsistent atom dimension");
      for (size_t j = i + 1; j < atoms.size(); ++j) {
        double d = 0.0;
        for (size_t c = 0; c < atoms[i].size(); ++c)
          d = std::max(d, std::fabs(atoms[i][c] - atoms[j][c]));
        if (d == 0.0) throw std::invalid_argument("DiscreteMeasure: duplicate atoms");
      }
    }
  }
};

// CSV row format: coord_1, ..., coord_n, weight
inline DiscreteMeasure read_measure_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_measure_csv: cannot open " + path);
  DiscreteMeasure mu;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::vector<double> vals;
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() < 2) throw std::runtime_error("read_measure_csv: short row in " + path);
    mu.weights.push_back(vals.back());
    vals.pop_back();
    mu.atoms.push_back(std::move(vals));
  }
  mu.validate();
  return mu;
}

inline void write_measure_csv(const std::string& path, const DiscreteMeasure& mu) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_measure_csv: cannot open " + path);
  char buf[64];
  for (int i = 0; i < mu.size(); ++i) {
    std::string row;
    for (double c : mu.atoms[i]) {
      std::snprintf(buf, sizeof buf, "%.17g,", c);
      row += buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", mu.weights[i]);
    row += buf;
    out << row;
  }
}

}  // namespace lfot
