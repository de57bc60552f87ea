#include "mfv/fixture.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mfh/error.hpp"

namespace mfv {

using nlohmann::ordered_json;
using mfh::Error;
using mfh::ErrorKind;

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& path, const std::string& what) {
  throw Error(ErrorKind::FixtureError, source + ": " + (path.empty() ? "" : path + ": ") + what);
}

// Line and column (1-based) of a byte offset.
std::pair<int, int> locate(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

struct Reader {
  std::string source;

  const ordered_json& at(const ordered_json& j, const std::string& key, const std::string& path) const {
    if (!j.is_object()) fail(source, path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(source, path, "missing key \"" + key + "\"");
    return *it;
  }
  std::string str(const ordered_json& j, const std::string& path) const {
    if (!j.is_string()) fail(source, path, "expected a string");
    return j.get<std::string>();
  }
  int integer(const ordered_json& j, const std::string& path) const {
    if (!j.is_number_integer()) fail(source, path, "expected an integer");
    return j.get<int>();
  }
  std::vector<std::string> strings(const ordered_json& j, const std::string& path) const {
    if (!j.is_array()) fail(source, path, "expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(str(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }
  std::vector<int> ints(const ordered_json& j, const std::string& path) const {
    if (!j.is_array()) fail(source, path, "expected an array");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }
  StringMatrix matrix(const ordered_json& j, const std::string& path) const {
    if (!j.is_array()) fail(source, path, "expected an array of rows");
    StringMatrix out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(strings(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }
  std::vector<StringMatrix> matrices(const ordered_json& j, const std::string& path) const {
    if (!j.is_array()) fail(source, path, "expected an array of matrices");
    std::vector<StringMatrix> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(matrix(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }
  RingSpec ring(const ordered_json& j, const std::string& path) const {
    RingSpec r;
    r.vars = strings(at(j, "vars", path), path + ".vars");
    if (j.contains("inverted")) {
      const auto& inv = j["inverted"];
      if (!inv.is_array()) fail(source, path + ".inverted", "expected an array of variable names");
      std::vector<std::string> names = strings(inv, path + ".inverted");
      r.inverted.assign(r.vars.size(), false);
      for (const auto& nm : names) {
        bool found = false;
        for (std::size_t l = 0; l < r.vars.size(); ++l)
          if (r.vars[l] == nm) r.inverted[l] = found = true;
        if (!found) fail(source, path + ".inverted", "unknown variable \"" + nm + "\"");
      }
    } else {
      r.inverted.assign(r.vars.size(), false);
    }
    if (j.contains("denominators")) r.denominators = strings(j["denominators"], path + ".denominators");
    return r;
  }
};

ordered_json ring_json(const RingSpec& r, ordered_json j) {
  j["vars"] = r.vars;
  std::vector<std::string> inv;
  for (std::size_t l = 0; l < r.vars.size(); ++l)
    if (r.inverted[l]) inv.push_back(r.vars[l]);
  j["inverted"] = inv;
  j["denominators"] = r.denominators;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FixtureError, path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ordered_json parse_json(std::string_view text, const std::string& source) {
  try {
    return ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = locate(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": JSON syntax error";
    throw Error(ErrorKind::FixtureError, os.str());
  }
}

}  // namespace

FixtureDocument parse_fixture(std::string_view text, const std::string& source) {
  ordered_json j = parse_json(text, source);
  Reader rd{source};
  FixtureDocument doc;
  doc.format = rd.str(rd.at(j, "format", ""), "format");
  if (doc.format != "mfv1") fail(source, "format", "unsupported format \"" + doc.format + "\"");
  doc.id = rd.str(rd.at(j, "id", ""), "id");
  doc.p = rd.integer(rd.at(j, "p", ""), "p");
  doc.m = rd.integer(rd.at(j, "m", ""), "m");
  doc.n = rd.integer(rd.at(j, "n", ""), "n");
  if (j.contains("cover")) doc.cover = rd.str(j["cover"], "cover");

  const auto& charts = rd.at(j, "charts", "");
  if (!charts.is_array() || charts.empty()) fail(source, "charts", "expected a non-empty array");
  for (std::size_t i = 0; i < charts.size(); ++i) {
    const std::string path = "charts[" + std::to_string(i) + "]";
    const auto& c = charts[i];
    ChartSpec cs;
    cs.id = rd.str(rd.at(c, "id", path), path + ".id");
    cs.kind = rd.str(rd.at(c, "kind", path), path + ".kind");
    cs.ring = rd.ring(c, path);
    cs.rank = rd.integer(rd.at(c, "rank", path), path + ".rank");
    if (cs.kind == "derham") {
      cs.fil = rd.ints(rd.at(c, "fil", path), path + ".fil");
      cs.A = rd.matrices(rd.at(c, "A", path), path + ".A");
      if (c.contains("F")) cs.F = rd.strings(c["F"], path + ".F");
      cs.Phi = rd.matrix(rd.at(c, "Phi", path), path + ".Phi");
    } else if (cs.kind == "higgs") {
      cs.fil = rd.ints(rd.at(c, "levels", path), path + ".levels");
      cs.A = rd.matrices(rd.at(c, "theta", path), path + ".theta");
    } else {
      fail(source, path + ".kind", "expected \"derham\" or \"higgs\"");
    }
    for (const auto& prev : doc.charts)
      if (prev.id == cs.id) fail(source, path + ".id", "duplicate chart id \"" + cs.id + "\"");
    doc.charts.push_back(std::move(cs));
  }
  auto known_chart = [&](const std::string& id) {
    for (const auto& c : doc.charts)
      if (c.id == id) return true;
    return false;
  };

  if (j.contains("overlaps")) {
    const auto& ovs = j["overlaps"];
    if (!ovs.is_array()) fail(source, "overlaps", "expected an array");
    for (std::size_t i = 0; i < ovs.size(); ++i) {
      const std::string path = "overlaps[" + std::to_string(i) + "]";
      const auto& o = ovs[i];
      OverlapSpec os;
      auto pair = rd.strings(rd.at(o, "charts", path), path + ".charts");
      if (pair.size() != 2) fail(source, path + ".charts", "expected two chart ids");
      for (const auto& id : pair)
        if (!known_chart(id)) fail(source, path + ".charts", "unknown chart \"" + id + "\"");
      os.first = pair[0];
      os.second = pair[1];
      os.ring = rd.ring(o, path);
      os.coordinate_change = rd.strings(rd.at(o, "coordinate_change", path), path + ".coordinate_change");
      os.transition = rd.matrix(rd.at(o, "transition", path), path + ".transition");
      doc.overlaps.push_back(std::move(os));
    }
  }
  if (j.contains("submodules")) {
    const auto& subs = j["submodules"];
    if (!subs.is_object()) fail(source, "submodules", "expected an object");
    for (const auto& [name, s] : subs.items()) {
      const std::string path = "submodules." + name;
      SubmoduleSpec ss;
      ss.chart = rd.str(rd.at(s, "chart", path), path + ".chart");
      if (!known_chart(ss.chart)) fail(source, path + ".chart", "unknown chart \"" + ss.chart + "\"");
      ss.space = rd.str(rd.at(s, "space", path), path + ".space");
      if (ss.space != "E0" && ss.space != "H0") fail(source, path + ".space", "expected \"E0\" or \"H0\"");
      ss.ambient_rank = rd.integer(rd.at(s, "ambient_rank", path), path + ".ambient_rank");
      ss.generators = rd.matrix(rd.at(s, "generators", path), path + ".generators");
      doc.submodules[name] = std::move(ss);
    }
  }
  if (j.contains("liftings")) {
    const auto& ls = j["liftings"];
    if (!ls.is_object()) fail(source, "liftings", "expected an object");
    for (const auto& [name, l] : ls.items()) {
      const std::string path = "liftings." + name;
      LiftingSpec spec;
      spec.chart = rd.str(rd.at(l, "chart", path), path + ".chart");
      if (!known_chart(spec.chart)) fail(source, path + ".chart", "unknown chart \"" + spec.chart + "\"");
      spec.images = rd.strings(rd.at(l, "images", path), path + ".images");
      doc.liftings[name] = std::move(spec);
    }
  }
  return doc;
}

FixtureDocument load_fixture(const std::string& path) { return parse_fixture(read_file(path), path); }

std::string render_fixture(const FixtureDocument& doc) {
  ordered_json j;
  j["format"] = doc.format;
  j["id"] = doc.id;
  j["p"] = doc.p;
  j["m"] = doc.m;
  j["n"] = doc.n;
  if (!doc.cover.empty()) j["cover"] = doc.cover;
  j["charts"] = ordered_json::array();
  for (const auto& c : doc.charts) {
    ordered_json cj;
    cj["id"] = c.id;
    cj["kind"] = c.kind;
    cj = ring_json(c.ring, cj);
    cj["rank"] = c.rank;
    if (c.kind == "derham") {
      cj["fil"] = c.fil;
      cj["A"] = c.A;
      if (!c.F.empty()) cj["F"] = c.F;
      cj["Phi"] = c.Phi;
    } else {
      cj["levels"] = c.fil;
      cj["theta"] = c.A;
    }
    j["charts"].push_back(cj);
  }
  if (!doc.overlaps.empty()) {
    j["overlaps"] = ordered_json::array();
    for (const auto& o : doc.overlaps) {
      ordered_json oj;
      oj["charts"] = {o.first, o.second};
      oj = ring_json(o.ring, oj);
      oj["coordinate_change"] = o.coordinate_change;
      oj["transition"] = o.transition;
      j["overlaps"].push_back(oj);
    }
  }
  if (!doc.submodules.empty()) {
    j["submodules"] = ordered_json::object();
    for (const auto& [name, s] : doc.submodules)
      j["submodules"][name] = {{"chart", s.chart}, {"space", s.space},
                               {"ambient_rank", s.ambient_rank}, {"generators", s.generators}};
  }
  if (!doc.liftings.empty()) {
    j["liftings"] = ordered_json::object();
    for (const auto& [name, l] : doc.liftings)
      j["liftings"][name] = {{"chart", l.chart}, {"images", l.images}};
  }
  return j.dump(2) + "\n";
}

std::map<std::string, std::vector<std::string>> load_liftings_file(const std::string& path) {
  std::string text = read_file(path);
  ordered_json j = parse_json(text, path);
  Reader rd{path};
  if (rd.str(rd.at(j, "format", ""), "format") != "mfv1-liftings")
    fail(path, "format", "expected \"mfv1-liftings\"");
  const auto& ls = rd.at(j, "liftings", "");
  if (!ls.is_object()) fail(path, "liftings", "expected an object");
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [chart, imgs] : ls.items()) out[chart] = rd.strings(imgs, "liftings." + chart);
  return out;
}

// ---- Model -----------------------------------------------------------------

namespace {

mfh::RingPtr make_ring(const FixtureDocument& doc, const RingSpec& r, int precision) {
  std::vector<std::vector<std::int64_t>> dens;
  for (const auto& d : r.denominators) {
    if (r.vars.size() != 1)
      throw Error(ErrorKind::InvalidRing, "denominators are only supported in dimension 1");
    dens.push_back(mfh::parse_integer_poly(d, r.vars[0]));
  }
  return mfh::ChartRing::make(doc.p, precision, r.vars, r.inverted, dens);
}

mfh::Matrix parse_matrix(const StringMatrix& rows, const mfh::RingPtr& R, int nrows, int ncols,
                         const std::string& what) {
  if (static_cast<int>(rows.size()) != nrows)
    throw Error(ErrorKind::InvalidInput, what + ": expected " + std::to_string(nrows) + " rows");
  std::vector<mfh::Vec> out;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != ncols)
      throw Error(ErrorKind::InvalidInput, what + ": expected " + std::to_string(ncols) + " columns");
    mfh::Vec v;
    for (const auto& s : row) v.push_back(mfh::parse_element(s, R));
    out.push_back(std::move(v));
  }
  return mfh::Matrix::from_rows(R, out);
}

// Errors raised while reading an expression get the location prefixed.
template <class F>
auto located(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), where + ": " + e.detail());
  }
}

}  // namespace

Model::Model(FixtureDocument doc) : doc_(std::move(doc)) {
  glued_.cover = doc_.cover;
  for (const ChartSpec& c : doc_.charts) {
    const std::string where = "chart " + c.id;
    if (c.kind == "derham") {
      mfh::RingPtr R = located(where, [&] { return make_ring(doc_, c.ring, doc_.m); });
      rings_[c.id] = R;
      std::vector<mfh::Matrix> A;
      for (std::size_t l = 0; l < c.A.size(); ++l)
        A.push_back(located(where + ".A[" + std::to_string(l) + "]",
                            [&] { return parse_matrix(c.A[l], R, c.rank, c.rank, "A"); }));
      mfh::FrobeniusLifting F = c.F.empty()
                                    ? mfh::FrobeniusLifting::standard(R)
                                    : located(where + ".F", [&] { return mfh::FrobeniusLifting::parse(R, c.F); });
      mfh::Matrix Phi = located(where + ".Phi", [&] { return parse_matrix(c.Phi, R, c.rank, c.rank, "Phi"); });
      glued_.derham.push_back(located(where, [&] {
        return mfh::DeRhamChart(c.id, doc_.n, c.fil, std::move(A), std::move(F), std::move(Phi));
      }));
    } else {
      mfh::RingPtr R = located(where, [&] { return make_ring(doc_, c.ring, 1); });
      rings_[c.id] = R;
      std::vector<mfh::Matrix> theta;
      for (std::size_t l = 0; l < c.A.size(); ++l)
        theta.push_back(located(where + ".theta[" + std::to_string(l) + "]",
                                [&] { return parse_matrix(c.A[l], R, c.rank, c.rank, "theta"); }));
      glued_.higgs.push_back(located(where, [&] { return mfh::HiggsChart(c.id, c.fil, std::move(theta)); }));
    }
  }
  for (std::size_t i = 0; i < doc_.overlaps.size(); ++i) {
    const OverlapSpec& o = doc_.overlaps[i];
    const std::string where = "overlap " + o.first + "," + o.second;
    const bool derham = doc_.charts.size() > 0 && glued_.find_derham(o.first) != nullptr;
    int precision = derham ? doc_.m : 1;
    mfh::RingPtr R = located(where, [&] { return make_ring(doc_, o.ring, precision); });
    std::vector<mfh::RingElement> phi;
    for (const auto& s : o.coordinate_change)
      phi.push_back(located(where + ".coordinate_change", [&] { return mfh::parse_element(s, R); }));
    int rank = static_cast<int>(o.transition.size());
    mfh::Matrix T = located(where + ".transition",
                            [&] { return parse_matrix(o.transition, R, rank, rank, "transition"); });
    glued_.overlaps.push_back({o.first, o.second, R, std::move(phi), std::move(T)});
  }
}

mfh::RingPtr Model::chart_ring(const std::string& id) const {
  auto it = rings_.find(id);
  if (it == rings_.end()) throw Error(ErrorKind::InvalidInput, "unknown chart \"" + id + "\"");
  return it->second;
}

const mfh::DeRhamChart& Model::derham(const std::string& id) const {
  const mfh::DeRhamChart* c = glued_.find_derham(id);
  if (!c) throw Error(ErrorKind::InvalidInput, "chart \"" + id + "\" is not a de Rham chart");
  return *c;
}

const mfh::DeRhamChart& Model::primary_derham() const {
  if (glued_.derham.empty()) throw Error(ErrorKind::InvalidInput, "fixture has no de Rham chart");
  return glued_.derham.front();
}

const SubmoduleSpec& Model::submodule_spec(const std::string& name) const {
  auto it = doc_.submodules.find(name);
  if (it == doc_.submodules.end()) throw Error(ErrorKind::InvalidInput, "unknown submodule \"" + name + "\"");
  return it->second;
}

mfh::Submodule Model::submodule(const std::string& name) const {
  return submodule_on(name, submodule_spec(name).chart);
}

mfh::Submodule Model::submodule_on(const std::string& name, const std::string& chart) const {
  const SubmoduleSpec& s = submodule_spec(name);
  mfh::RingPtr R1 = chart_ring(chart)->with_precision(1);
  return located("submodule " + name, [&] {
    std::vector<mfh::Vec> gens;
    for (const auto& g : s.generators) {
      if (static_cast<int>(g.size()) != s.ambient_rank)
        throw Error(ErrorKind::AmbientMismatch, "generator length differs from ambient_rank");
      mfh::Vec v;
      for (const auto& x : g) v.push_back(mfh::parse_element(x, R1));
      gens.push_back(std::move(v));
    }
    return mfh::Submodule(R1, s.ambient_rank, std::move(gens));
  });
}

mfh::FrobeniusLifting Model::parse_lifting(const std::string& chart,
                                           const std::vector<std::string>& images) const {
  mfh::RingPtr R = chart_ring(chart);
  if (R->precision() < 2) R = R->with_precision(2);
  return located("lifting on " + chart, [&] {
    mfh::FrobeniusLifting F = mfh::FrobeniusLifting::parse(R, images);
    F.check();
    return F;
  });
}

mfh::FrobeniusLifting Model::lifting(const std::string& name) const {
  auto it = doc_.liftings.find(name);
  if (it == doc_.liftings.end()) throw Error(ErrorKind::InvalidInput, "unknown lifting \"" + name + "\"");
  return parse_lifting(it->second.chart, it->second.images);
}

std::map<std::string, mfh::FrobeniusLifting> Model::liftings_by_chart() const {
  std::map<std::string, mfh::FrobeniusLifting> out;
  for (const auto& [name, l] : doc_.liftings)
    if (!out.count(l.chart)) out.emplace(l.chart, parse_lifting(l.chart, l.images));
  return out;
}

}  // namespace mfv
