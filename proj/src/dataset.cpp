#include <algorithm>
#include <cstdio>

#include "malseq/error.hpp"
#include "malseq/ml.hpp"

namespace malseq {

std::size_t Dataset::count(Label label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.attributes = attributes;
  out.is_numeric = is_numeric;
  for (std::size_t i : indices) {
    out.ids.push_back(ids[i]);
    out.labels.push_back(labels[i]);
    if (is_numeric) {
      out.numeric.push_back(numeric[i]);
    } else {
      out.categorical.push_back(categorical[i]);
    }
  }
  return out;
}

Dataset build_dataset(const std::vector<ResidueSequence>& rows, bool numeric) {
  if (rows.empty()) throw MlError("dataset needs at least one row");
  const std::size_t width = rows.front().letters.size();
  Dataset d;
  d.is_numeric = numeric;
  d.attributes.reserve(width);
  for (std::size_t k = 0; k < width; ++k) d.attributes.push_back("pos" + std::to_string(k + 1));
  for (const auto& row : rows) {
    if (row.letters.size() != width) {
      throw MlError("row '" + row.id + "' has " + std::to_string(row.letters.size()) + " columns, expected " +
                    std::to_string(width) + " (align or pad first)");
    }
    d.ids.push_back(row.id);
    d.labels.push_back(row.label);
    if (numeric) {
      d.numeric.push_back(to_numeric(row.letters));
    } else {
      d.categorical.push_back(row.letters);
    }
  }
  return d;
}

std::vector<ResidueSequence> pad_rows(std::vector<ResidueSequence> rows, char pad) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.letters.size());
  for (auto& r : rows) r.letters.resize(width, pad);
  return rows;
}

std::string dataset_to_csv(const Dataset& d) {
  std::string out;
  for (const auto& a : d.attributes) {
    out += a;
    out += ',';
  }
  out += "label\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t k = 0; k < d.width(); ++k) {
      if (d.is_numeric) {
        // The ladder values are exact hundredths.
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.2f", d.numeric[i][k]);
        out += buf;
      } else {
        out += d.categorical[i][k];
      }
      out += ',';
    }
    out += d.labels[i] == Label::worm ? "1\n" : "0\n";
  }
  return out;
}

void ConfusionMatrix::add(Label truth, Label predicted) {
  if (truth == Label::worm) {
    ++(predicted == Label::worm ? tp : fn);
  } else {
    ++(predicted == Label::virus ? tn : fp);
  }
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  tp += o.tp;
  tn += o.tn;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw MlError("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

}  // namespace malseq
