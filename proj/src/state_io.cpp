// Copyright 2026 The fockent Authors
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

#include "fockent/state_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fockent/errors.hpp"

namespace fockent {

using nlohmann::json;

namespace {

Site parse_site(const std::string& s) {
  if (s == "A") return Site::A;
  if (s == "B") return Site::B;
  throw ParseError("unknown site '" + s + "'");
}

ModeKind parse_kind(const std::string& s) {
  if (s == "field") return ModeKind::Field;
  if (s == "register") return ModeKind::Register;
  throw ParseError("unknown mode kind '" + s + "'");
}

ModeLayout parse_modes(const json& modes) {
  if (!modes.is_array() || modes.empty()) throw ParseError("'modes' must be a nonempty array");
  std::vector<ModeDescriptor> out;
  for (const auto& m : modes) {
    ModeDescriptor d;
    d.id = m.at("id").get<std::string>();
    d.site = parse_site(m.at("site").get<std::string>());
    d.kind = parse_kind(m.at("kind").get<std::string>());
    d.capacity = m.at("capacity").get<int>();
    out.push_back(std::move(d));
  }
  try {
    return ModeLayout(std::move(out));
  } catch (const LayoutError& e) {
    throw ParseError(e.what());
  }
}

json modes_to_json(const ModeLayout& layout) {
  json modes = json::array();
  for (const auto& m : layout) {
    modes.push_back({{"id", m.id},
                     {"site", to_string(m.site)},
                     {"kind", m.kind == ModeKind::Field ? "field" : "register"},
                     {"capacity", m.capacity}});
  }
  return modes;
}

}  // namespace

LoadedState parse_state(const json& doc) {
  try {
    if (!doc.is_object()) throw ParseError("state file must be a JSON object");
    ModeLayout layout = parse_modes(doc.at("modes"));
    const json& terms = doc.at("terms");
    if (!terms.is_array() || terms.empty()) throw ParseError("'terms' must be a nonempty array");
    AmplitudeMap amps;
    for (const auto& t : terms) {
      BasisLabel label(t.at("occ").get<std::vector<int>>());
      if (label.size() != layout.size()) throw ParseError("occupation vector length mismatch");
      for (std::size_t i = 0; i < layout.size(); ++i) {
        if (label[i] < 0 || label[i] > layout[i].capacity) {
          throw ParseError("occupation " + to_string(label) + " exceeds the capacity of mode '" +
                           layout[i].id + "'");
        }
      }
      const auto amp = t.at("amp").get<std::vector<double>>();
      if (amp.size() != 2) throw ParseError("amplitudes are [re, im] pairs");
      if (!amps.emplace(label, Amplitude(amp[0], amp[1])).second) {
        throw ParseError("duplicate term " + to_string(label));
      }
    }
    const double norm = std::sqrt(squared_norm(amps));
    if (norm == 0.0) throw ParseError("state has zero norm");
    std::optional<std::string> warning;
    if (std::abs(norm - 1.0) > 1e-6) {
      std::ostringstream os;
      os.precision(12);
      os << "amplitudes renormalized (norm was " << norm << ")";
      warning = os.str();
    }
    return {PureState::normalized(std::move(layout), std::move(amps)), warning};
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed state file: ") + e.what());
  }
}

LoadedState parse_state_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_state(doc);
}

LoadedState load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_text(buf.str());
}

json state_to_json(const PureState& state) {
  json terms = json::array();
  for (const auto& [label, amp] : state.amplitudes()) {
    terms.push_back({{"occ", label.occupations}, {"amp", {amp.real(), amp.imag()}}});
  }
  return {{"modes", modes_to_json(state.layout())}, {"terms", terms}};
}

json density_to_json(const DensityOperator& rho) {
  json basis = json::array();
  for (const auto& b : rho.basis()) basis.push_back(b.occupations);
  json re = json::array();
  json im = json::array();
  const auto& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ri = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"modes", modes_to_json(rho.layout())}, {"basis", basis}, {"re", re}, {"im", im}};
}

DensityOperator density_from_json(const json& doc) {
  try {
    ModeLayout layout = parse_modes(doc.at("modes"));
    std::vector<BasisLabel> basis;
    for (const auto& b : doc.at("basis")) basis.emplace_back(b.get<std::vector<int>>());
    const auto n = static_cast<Eigen::Index>(basis.size());
    const auto& re = doc.at("re");
    const auto& im = doc.at("im");
    if (static_cast<Eigen::Index>(re.size()) != n || static_cast<Eigen::Index>(im.size()) != n) {
      throw ParseError("density matrix size does not match its basis");
    }
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto r = re.at(static_cast<std::size_t>(i)).get<std::vector<double>>();
      const auto c = im.at(static_cast<std::size_t>(i)).get<std::vector<double>>();
      if (static_cast<Eigen::Index>(r.size()) != n || static_cast<Eigen::Index>(c.size()) != n) {
        throw ParseError("density matrix rows must be square");
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        m(i, j) = {r[static_cast<std::size_t>(j)], c[static_cast<std::size_t>(j)]};
      }
    }
    DensityOperator rho(std::move(layout), std::move(basis), std::move(m));
    rho.validate();
    return rho;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed density matrix: ") + e.what());
  }
}

}  // namespace fockent
