// Copyright 2026 The harbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "harbench/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

#include "harbench/features.hpp"

namespace harbench::dataset {
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path, const fs::path& root) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::MissingFile, fs::relative(path, root).generic_string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Splits text into non-empty lines and each line into whitespace-separated
// tokens; repeated spaces count as one delimiter.
template <class OnToken>
std::size_t for_each_token(std::string_view text, OnToken&& on_token) {
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    std::size_t col = 0;
    std::size_t i = 0;
    bool any = false;
    while (i < line.size()) {
      while (i < line.size() && is_space(line[i])) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !is_space(line[j])) ++j;
      on_token(row, col++, line.substr(i, j - i));
      any = true;
      i = j;
    }
    if (any) ++row;
  }
  return row;
}

std::string where(const std::string& file, std::size_t row, std::size_t col) {
  return file + " row " + std::to_string(row + 1) + " column " + std::to_string(col + 1);
}

double parse_real(std::string_view tok, const std::string& file, std::size_t row, std::size_t col) {
  double v = 0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw Error(Errc::NonFiniteValue, where(file, row, col) + ": '" + std::string(tok) + "'");
  }
  return v;
}

// Reads a whitespace-separated numeric table with a fixed column count.
std::vector<double> read_table(const fs::path& root, const std::string& rel, std::size_t cols,
                               std::size_t& rows) {
  const std::string text = read_file(root / rel, root);
  std::vector<double> values;
  values.reserve(text.size() / 8);
  std::size_t last_row = 0, row_cols = 0;
  auto check_row = [&](std::size_t r, std::size_t n) {
    if (n != cols) {
      throw Error(Errc::RowCountMismatch, rel + " row " + std::to_string(r + 1) + " has " +
                                              std::to_string(n) + " columns, expected " + std::to_string(cols));
    }
  };
  rows = for_each_token(text, [&](std::size_t r, std::size_t c, std::string_view tok) {
    if (r != last_row) {
      check_row(last_row, row_cols);
      last_row = r;
      row_cols = 0;
    }
    ++row_cols;
    values.push_back(parse_real(tok, rel, r, c));
  });
  if (rows > 0) check_row(last_row, row_cols);
  return values;
}

std::vector<int> read_ints(const fs::path& root, const std::string& rel, int lo, int hi, const char* what) {
  std::size_t rows = 0;
  const auto raw = read_table(root, rel, 1, rows);
  std::vector<int> out;
  out.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double v = raw[r];
    if (v != std::floor(v) || v < lo || v > hi) {
      throw Error(Errc::BadLabel, rel + " row " + std::to_string(r + 1) + ": " + what + " " +
                                      std::to_string(v) + " outside " + std::to_string(lo) + ".." +
                                      std::to_string(hi));
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<std::string> read_feature_names(const fs::path& root) {
  const std::string text = read_file(root / "features.txt", root);
  std::vector<std::string> names;
  for_each_token(text, [&](std::size_t r, std::size_t c, std::string_view tok) {
    if (c == 1) {
      if (names.size() != r) throw Error(Errc::RowCountMismatch, "features.txt row " + std::to_string(r + 1));
      names.emplace_back(tok);
    }
  });
  return features::make_unique_names(names);
}

std::string inertial_file(std::string_view channel, std::string_view part) {
  return std::string(part) + "/Inertial Signals/" + std::string(channel) + "_" + std::string(part) + ".txt";
}

struct Partial {
  std::vector<double> x;
  std::vector<int> y, subject;
  std::vector<std::vector<double>> channels;
  std::size_t rows = 0;
};

Partial load_partition(const fs::path& root, std::string_view part, std::size_t n_features) {
  const std::string p(part);
  Partial out;
  // Existence first, so a missing file is reported before any parse error.
  std::vector<std::string> files{p + "/X_" + p + ".txt", p + "/y_" + p + ".txt", p + "/subject_" + p + ".txt"};
  for (auto c : kChannelNames) files.push_back(inertial_file(c, part));
  for (const auto& f : files) {
    if (!fs::exists(root / f)) throw Error(Errc::MissingFile, f);
  }

  out.x = read_table(root, files[0], n_features, out.rows);
  out.y = read_ints(root, files[1], 1, kClassCount, "label");
  out.subject = read_ints(root, files[2], 1, kSubjectCount, "subject");
  auto mismatch = [&](const std::string& f, std::size_t n) {
    if (n != out.rows) {
      throw Error(Errc::RowCountMismatch, f + " has " + std::to_string(n) + " rows, " + files[0] + " has " +
                                              std::to_string(out.rows));
    }
  };
  mismatch(files[1], out.y.size());
  mismatch(files[2], out.subject.size());
  for (std::size_t c = 0; c < kChannels; ++c) {
    std::size_t rows = 0;
    out.channels.push_back(read_table(root, files[3 + c], kSamples, rows));
    mismatch(files[3 + c], rows);
  }
  return out;
}

void write_lines(const fs::path& path, std::size_t rows, std::size_t cols,
                 const std::function<double(std::size_t, std::size_t)>& value) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out << (c == 0 ? "" : " ") << value(r, c);
    out << '\n';
  }
}

}  // namespace

std::string_view activity_name(int code) {
  if (code < 1 || code > kClassCount) throw Error(Errc::BadLabel, "activity code " + std::to_string(code));
  return kActivityNames[static_cast<std::size_t>(code - 1)];
}

int activity_code(std::string_view name) {
  for (std::size_t i = 0; i < kActivityNames.size(); ++i) {
    if (kActivityNames[i] == name) return static_cast<int>(i) + 1;
  }
  throw Error(Errc::BadLabel, "activity name " + std::string(name));
}

std::size_t channel_index(std::string_view name) {
  for (std::size_t i = 0; i < kChannelNames.size(); ++i) {
    if (kChannelNames[i] == name) return i;
  }
  throw Error(Errc::UnknownChannel, std::string(name));
}

std::string_view partition_name(Partition p) noexcept { return p == Partition::train ? "train" : "test"; }

DatasetBundle load_bundle(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(Errc::MissingFile, root.string() + " is not a directory");
  DatasetBundle b;
  b.features.names = read_feature_names(root);
  const std::size_t d = b.features.names.size();

  const Partial train = load_partition(root, "train", d);
  const Partial test = load_partition(root, "test", d);
  const std::size_t n = train.rows + test.rows;

  b.features.values = MatrixD(n, d);
  b.inertial.count = n;
  b.inertial.data.resize(n * kChannels * kSamples);
  b.labels.reserve(n);
  b.subjects.reserve(n);
  b.ids.reserve(n);

  std::size_t outside = 0;
  std::size_t dst = 0;
  for (const auto* part : {&train, &test}) {
    const Partition tag = part == &train ? Partition::train : Partition::test;
    for (std::size_t r = 0; r < part->rows; ++r, ++dst) {
      auto row = b.features.values.row(dst);
      std::copy_n(part->x.begin() + static_cast<std::ptrdiff_t>(r * d), d, row.begin());
      for (double v : row) outside += (v < -1.0 || v > 1.0) ? 1 : 0;
      for (std::size_t c = 0; c < kChannels; ++c) {
        std::copy_n(part->channels[c].begin() + static_cast<std::ptrdiff_t>(r * kSamples), kSamples,
                    b.inertial.data.begin() + static_cast<std::ptrdiff_t>((dst * kChannels + c) * kSamples));
      }
      b.labels.push_back(part->y[r]);
      b.subjects.push_back(part->subject[r]);
      b.ids.push_back({tag, static_cast<std::uint32_t>(r)});
    }
  }
  if (outside > 0) {
    b.warnings.push_back(std::to_string(outside) + " feature values lie outside [-1, 1]");
  }
  return b;
}

void write_bundle(const DatasetBundle& bundle, const fs::path& root) {
  fs::create_directories(root);
  {
    std::ofstream out(root / "features.txt");
    for (std::size_t j = 0; j < bundle.features.names.size(); ++j) {
      std::string name = bundle.features.names[j];
      if (const auto hash = name.find('#'); hash != std::string::npos) name.resize(hash);
      out << j + 1 << ' ' << name << '\n';
    }
  }
  {
    std::ofstream out(root / "activity_labels.txt");
    for (int c = 1; c <= kClassCount; ++c) out << c << ' ' << activity_name(c) << '\n';
  }
  for (Partition part : {Partition::train, Partition::test}) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < bundle.size(); ++i) {
      if (bundle.ids[i].partition == part) rows.push_back(i);
    }
    const std::string p(partition_name(part));
    const std::size_t d = bundle.features.values.cols();
    write_lines(root / p / ("X_" + p + ".txt"), rows.size(), d,
                [&](std::size_t r, std::size_t c) { return bundle.features.values(rows[r], c); });
    write_lines(root / p / ("y_" + p + ".txt"), rows.size(), 1,
                [&](std::size_t r, std::size_t) { return static_cast<double>(bundle.labels[rows[r]]); });
    write_lines(root / p / ("subject_" + p + ".txt"), rows.size(), 1,
                [&](std::size_t r, std::size_t) { return static_cast<double>(bundle.subjects[rows[r]]); });
    for (std::size_t c = 0; c < kChannels; ++c) {
      write_lines(root / inertial_file(kChannelNames[c], p), rows.size(), kSamples,
                  [&](std::size_t r, std::size_t t) { return bundle.inertial.channel(rows[r], c)[t]; });
    }
  }
}

VerificationReport verify_bundle(const DatasetBundle& bundle) {
  VerificationReport rep;
  rep.n_total = bundle.size();
  for (int y : bundle.labels) {
    if (y >= 1 && y <= kClassCount) ++rep.per_class[static_cast<std::size_t>(y - 1)];
  }
  for (int s : bundle.subjects) {
    if (s >= 1 && s <= kSubjectCount) ++rep.per_subject[static_cast<std::size_t>(s - 1)];
  }
  for (int c = 0; c < kClassCount; ++c) {
    if (rep.per_class[static_cast<std::size_t>(c)] == 0) rep.empty_classes.push_back(c + 1);
  }
  for (int s = 0; s < kSubjectCount; ++s) {
    if (rep.per_subject[static_cast<std::size_t>(s)] == 0) rep.absent_subjects.push_back(s + 1);
  }
  const auto& fv = bundle.features.values.storage();
  if (!fv.empty()) {
    const auto [lo, hi] = std::minmax_element(fv.begin(), fv.end());
    rep.feature_range = {*lo, *hi};
    rep.features_outside_unit =
        static_cast<std::size_t>(std::count_if(fv.begin(), fv.end(), [](double v) { return v < -1.0 || v > 1.0; }));
  }
  for (std::size_t c = 0; c < kChannels; ++c) {
    ValueRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < bundle.inertial.count; ++i) {
      for (double v : bundle.inertial.channel(i, c)) {
        r.min = std::min(r.min, v);
        r.max = std::max(r.max, v);
      }
    }
    rep.channel_ranges[c] = bundle.inertial.count ? r : ValueRange{};
  }
  return rep;
}

std::string VerificationReport::to_text() const {
  std::ostringstream out;
  out << "instances: " << n_total << '\n';
  out << "classes present: " << (kClassCount - empty_classes.size()) << " of " << kClassCount << '\n';
  for (int c = 0; c < kClassCount; ++c) {
    out << "  " << c + 1 << ' ' << std::left << std::setw(20) << kActivityNames[static_cast<std::size_t>(c)]
        << per_class[static_cast<std::size_t>(c)] << (per_class[static_cast<std::size_t>(c)] == 0 ? "  EMPTY" : "")
        << '\n';
  }
  out << "subjects present: " << (kSubjectCount - absent_subjects.size()) << " of " << kSubjectCount << '\n';
  out << "  ";
  for (int s = 0; s < kSubjectCount; ++s) {
    out << s + 1 << ':' << per_subject[static_cast<std::size_t>(s)] << (s + 1 < kSubjectCount ? " " : "\n");
  }
  out << std::setprecision(6);
  out << "feature range: [" << feature_range.min << ", " << feature_range.max << "]";
  if (features_outside_unit > 0) out << "  WARNING: " << features_outside_unit << " values outside [-1, 1]";
  out << '\n';
  for (std::size_t c = 0; c < kChannels; ++c) {
    out << "  " << std::left << std::setw(12) << kChannelNames[c] << " [" << channel_ranges[c].min << ", "
        << channel_ranges[c].max << "]\n";
  }
  return out.str();
}

MatrixD select_channel(const DatasetBundle& bundle, std::string_view channel) {
  const std::size_t c = channel_index(channel);
  MatrixD out(bundle.inertial.count, kSamples);
  for (std::size_t i = 0; i < bundle.inertial.count; ++i) {
    const auto src = bundle.inertial.channel(i, c);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace harbench::dataset
