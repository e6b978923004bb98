#pragma once

// Self-contained SVG charts. Coordinates are printed with fixed precision so
// identical inputs give identical bytes.

#include <string>
#include <vector>

namespace docstat::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Axes {
  std::string title;
  std::string x_label;
  std::string y_label;
};

// Line chart over the data range; `diagonal` adds the y = x reference line
// (ROC plots).
std::string line_chart(const std::vector<Series>& series, const Axes& axes, bool diagonal = false,
                       bool unit_square = false);

struct ScatterGroup {
  std::string name;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

std::string scatter(const std::vector<ScatterGroup>& groups, const Axes& axes,
                    const std::vector<std::string>& point_labels = {});

// Bars over [edges[i], edges[i+1]); `marker_x` draws a vertical reference line.
// `note` is printed under the title.
std::string histogram(const std::vector<double>& edges, const std::vector<double>& counts,
                      const Axes& axes, double marker_x, const std::string& note);

// Square matrix of values in [-1, 1], row-major, with row/column labels.
std::string heatmap(const std::vector<std::string>& labels, const std::vector<double>& values,
                    const std::string& title);

}  // namespace docstat::svg
