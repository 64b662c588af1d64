#include "confpred/dataset.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "confpred/errors.hpp"

namespace confpred {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* p = s.c_str();
  char* end = nullptr;
  out = std::strtod(p, &end);
  return end == p + s.size();
}

std::string basename_of(const std::string& path) {
  auto pos = path.find_last_of("/\\");
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

void apply_meta(Dataset& d, const std::string& meta_text) {
  if (meta_text.empty()) return;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(meta_text);
  } catch (const std::exception& e) {
    throw InputError(d.name + ": bad metadata json: " + e.what());
  }
  if (!j.is_object()) throw InputError(d.name + ": metadata must be a json object");
  if (j.contains("label_column")) d.label_column = j.at("label_column").get<std::string>();
  if (j.contains("label_kind")) {
    d.label_kind = j.at("label_kind").get<std::string>();
    if (d.label_kind != "real" && d.label_kind != "categorical")
      throw InputError(d.name + ": label_kind must be \"real\" or \"categorical\"");
  }
  if (j.contains("grid_step")) d.grid_step = j.at("grid_step").get<double>();
  if (j.contains("grid_origin")) d.grid_origin = j.at("grid_origin").get<double>();
  if (d.grid_step < 0.0) throw InputError(d.name + ": grid_step must be positive");
}

}  // namespace

Dataset ingest_text(const std::string& csv_text, const std::string& meta_text,
                    const std::string& name) {
  Dataset d;
  d.name = name;

  std::vector<std::string> lines;
  std::string cur;
  for (char c : csv_text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  // drop trailing blank lines only; interior blanks are errors with a row index
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();

  if (lines.empty()) throw InputError(name + ": empty file, expected a header row");

  d.columns = split_cells(lines[0]);
  for (std::size_t c = 0; c < d.columns.size(); ++c) {
    if (d.columns[c].empty())
      throw InputError(name + ": header column " + std::to_string(c + 1) + " is empty");
    for (std::size_t c2 = 0; c2 < c; ++c2)
      if (d.columns[c2] == d.columns[c])
        throw InputError(name + ": duplicate header column \"" + d.columns[c] + "\"");
  }

  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (trim(lines[r]).empty())
      throw InputError(name + ": row " + std::to_string(r + 1) + " is blank");
    auto cells = split_cells(lines[r]);
    if (cells.size() != d.columns.size())
      throw InputError(name + ": row " + std::to_string(r + 1) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(d.columns.size()));
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (cells[c].empty())
        throw InputError(name + ": row " + std::to_string(r + 1) + " column \"" +
                         d.columns[c] + "\" is empty");
    d.rows.push_back(std::move(cells));
  }
  if (d.rows.empty()) throw InputError(name + ": no data rows after the header");

  apply_meta(d, meta_text);
  if (!d.label_column.empty()) column_index(d, d.label_column);  // validate
  return d;
}

Dataset ingest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();

  std::string meta_path = path;
  const std::string ext = ".csv";
  if (meta_path.size() >= ext.size() &&
      meta_path.compare(meta_path.size() - ext.size(), ext.size(), ext) == 0)
    meta_path.resize(meta_path.size() - ext.size());
  meta_path += ".meta.json";

  std::string meta_text;
  std::ifstream meta_in(meta_path, std::ios::binary);
  if (meta_in) {
    std::ostringstream mbuf;
    mbuf << meta_in.rdbuf();
    meta_text = mbuf.str();
  }
  return ingest_text(buf.str(), meta_text, basename_of(path));
}

std::string emit(const Dataset& d) {
  std::string out;
  for (std::size_t c = 0; c < d.columns.size(); ++c) {
    if (c) out.push_back(',');
    out += d.columns[c];
  }
  out.push_back('\n');
  for (const auto& row : d.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out.push_back(',');
      out += row[c];
    }
    out.push_back('\n');
  }
  return out;
}

std::size_t column_index(const Dataset& d, const std::string& column) {
  for (std::size_t c = 0; c < d.columns.size(); ++c)
    if (d.columns[c] == column) return c;
  std::string names;
  for (std::size_t c = 0; c < d.columns.size(); ++c) {
    if (c) names += ", ";
    names += d.columns[c];
  }
  throw InputError(d.name + ": no column \"" + column + "\" (have: " + names + ")");
}

std::vector<double> numeric_column(const Dataset& d, const std::string& column) {
  std::size_t c = column_index(d, column);
  std::vector<double> out;
  out.reserve(d.rows.size());
  for (std::size_t r = 0; r < d.rows.size(); ++r) {
    double v;
    if (!parse_double(d.rows[r][c], v))
      throw InputError(d.name + ": row " + std::to_string(r + 2) + " column \"" + column +
                       "\": \"" + d.rows[r][c] + "\" is not a number");
    out.push_back(v);
  }
  return out;
}

std::vector<Example> to_examples(const Dataset& d, const std::string& label_column,
                                 const std::vector<std::string>& features) {
  std::size_t lab_c = column_index(d, label_column);

  std::vector<std::size_t> feat_idx;
  if (features.empty()) {
    for (std::size_t c = 0; c < d.columns.size(); ++c)
      if (c != lab_c) feat_idx.push_back(c);
  } else {
    for (const auto& f : features) {
      std::size_t c = column_index(d, f);
      if (c == lab_c)
        throw InputError(d.name + ": column \"" + f + "\" is both label and feature");
      feat_idx.push_back(c);
    }
  }

  // the metadata kind describes the metadata's own label column only
  bool kind_applies = !d.label_kind.empty() && label_column == d.label_column;
  bool real_label;
  if (kind_applies && d.label_kind == "real") {
    real_label = true;
  } else if (kind_applies && d.label_kind == "categorical") {
    real_label = false;
  } else {
    real_label = true;
    for (const auto& row : d.rows) {
      double v;
      if (!parse_double(row[lab_c], v)) {
        real_label = false;
        break;
      }
    }
  }

  std::vector<Example> out;
  out.reserve(d.rows.size());
  for (std::size_t r = 0; r < d.rows.size(); ++r) {
    Example e;
    for (std::size_t c : feat_idx) {
      double v;
      if (!parse_double(d.rows[r][c], v))
        throw InputError(d.name + ": row " + std::to_string(r + 2) + " column \"" +
                         d.columns[c] + "\": \"" + d.rows[r][c] + "\" is not a number");
      e.x.push_back(v);
    }
    if (real_label) {
      double v;
      if (!parse_double(d.rows[r][lab_c], v))
        throw InputError(d.name + ": row " + std::to_string(r + 2) + " column \"" +
                         d.columns[lab_c] + "\": \"" + d.rows[r][lab_c] +
                         "\" is not a number but the label kind is real");
      e.y = Label{v};
    } else {
      e.y = Label{d.rows[r][lab_c]};
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace confpred
