#include "proxibound/dataset.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "proxibound/errors.hpp"

namespace proxibound {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim spaces and a possible trailing \r
    std::size_t b = field.find_first_not_of(" \t\r");
    std::size_t e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

Dataset::Dataset(Codebook observed_cb, std::vector<int32_t> rows)
    : cb_(std::move(observed_cb)), rows_(std::move(rows)) {
  for (int i = 0; i < cb_.n_axes(); ++i)
    if (cb_.is_latent(i)) throw SchemaError("dataset codebook must not contain latent variables");
  cols_ = cb_.n_axes();
  if (cols_ == 0) throw SchemaError("dataset needs at least one variable");
  if (rows_.size() % static_cast<std::size_t>(cols_) != 0)
    throw SchemaError("dataset row buffer not divisible by column count");
  n_ = rows_.size() / static_cast<std::size_t>(cols_);
  if (n_ == 0) throw SchemaError("dataset must contain at least one record");
  for (std::size_t r = 0; r < n_; ++r) {
    auto rec = record(r);
    for (int c = 0; c < cols_; ++c)
      if (rec[c] < 0 || rec[c] >= cb_.cardinality(c))
        throw SchemaError("category index out of range in record " + std::to_string(r));
  }
}

Dataset Dataset::from_csv(std::istream& in, const Codebook& observed_cb) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty dataset stream");
  std::vector<std::string> header = split_csv_line(line);
  if (static_cast<int>(header.size()) != observed_cb.n_axes())
    throw SchemaError("CSV header column count does not match codebook");
  for (int i = 0; i < observed_cb.n_axes(); ++i)
    if (header[i] != observed_cb.var(i).name)
      throw SchemaError("CSV header column '" + header[i] + "' does not match codebook variable '" +
                        observed_cb.var(i).name + "'");
  std::vector<int32_t> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != observed_cb.n_axes())
      throw SchemaError("CSV line " + std::to_string(lineno) + " has wrong column count");
    for (const std::string& f : fields) {
      std::size_t pos = 0;
      int v;
      try {
        v = std::stoi(f, &pos);
      } catch (const std::exception&) {
        throw SchemaError("non-integer field on CSV line " + std::to_string(lineno));
      }
      if (pos != f.size()) throw SchemaError("non-integer field on CSV line " + std::to_string(lineno));
      rows.push_back(v);
    }
  }
  return Dataset(observed_cb, std::move(rows));
}

void Dataset::to_csv(std::ostream& out) const {
  for (int i = 0; i < cols_; ++i) out << (i ? "," : "") << cb_.var(i).name;
  out << "\n";
  for (std::size_t r = 0; r < n_; ++r) {
    auto rec = record(r);
    for (int c = 0; c < cols_; ++c) out << (c ? "," : "") << rec[c];
    out << "\n";
  }
}

}  // namespace proxibound
