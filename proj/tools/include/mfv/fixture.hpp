#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfh/mf_data.hpp"
#include "mfh/submodule.hpp"

namespace mfv {

using StringMatrix = std::vector<std::vector<std::string>>;

/// Ring presentation shared by charts and overlaps.
struct RingSpec {
  std::vector<std::string> vars;
  std::vector<bool> inverted;
  std::vector<std::string> denominators;  ///< integer polynomials, e.g. "t - 1"

  bool operator==(const RingSpec&) const = default;
};

struct ChartSpec {
  std::string id;
  std::string kind;  ///< "derham" or "higgs"
  RingSpec ring;
  int rank = 0;
  std::vector<int> fil;         ///< filtration levels (derham) or grading (higgs)
  std::vector<StringMatrix> A;  ///< connection (derham) or theta (higgs), one per variable
  std::vector<std::string> F;   ///< derham only; empty means t -> t^p
  StringMatrix Phi;             ///< derham only

  bool operator==(const ChartSpec&) const = default;
};

struct OverlapSpec {
  std::string first;
  std::string second;
  RingSpec ring;
  std::vector<std::string> coordinate_change;
  StringMatrix transition;

  bool operator==(const OverlapSpec&) const = default;
};

struct SubmoduleSpec {
  std::string chart;
  std::string space;  ///< "E0" (Higgs side) or "H0" (de Rham side)
  int ambient_rank = 0;
  std::vector<std::vector<std::string>> generators;

  bool operator==(const SubmoduleSpec&) const = default;
};

struct LiftingSpec {
  std::string chart;
  std::vector<std::string> images;

  bool operator==(const LiftingSpec&) const = default;
};

/// The "mfv1" fixture document. Expressions are kept verbatim so that
/// rendering is lossless.
struct FixtureDocument {
  std::string format = "mfv1";
  std::string id;
  int p = 0;
  int m = 1;
  int n = 0;
  std::string cover;
  std::vector<ChartSpec> charts;
  std::vector<OverlapSpec> overlaps;
  std::map<std::string, SubmoduleSpec> submodules;
  std::map<std::string, LiftingSpec> liftings;

  bool operator==(const FixtureDocument&) const = default;
};

/// Throws FixtureError; JSON syntax errors carry line and column, schema
/// errors the offending key path.
FixtureDocument parse_fixture(std::string_view text, const std::string& source = "<input>");
FixtureDocument load_fixture(const std::string& path);
std::string render_fixture(const FixtureDocument& doc);

/// Liftings file: {"format": "mfv1-liftings", "liftings": {chart: [images]}}.
std::map<std::string, std::vector<std::string>> load_liftings_file(const std::string& path);

/// Typed objects built from a document.
class Model {
 public:
  explicit Model(FixtureDocument doc);

  const FixtureDocument& doc() const noexcept { return doc_; }
  const mfh::GluedObject& glued() const noexcept { return glued_; }
  /// Ring of chart `id` at its native precision (m for de Rham, 1 for Higgs).
  mfh::RingPtr chart_ring(const std::string& id) const;
  const mfh::DeRhamChart& derham(const std::string& id) const;
  /// The first de Rham chart.
  const mfh::DeRhamChart& primary_derham() const;

  const SubmoduleSpec& submodule_spec(const std::string& name) const;
  mfh::Submodule submodule(const std::string& name) const;
  /// The same generators read on another chart's residue ring.
  mfh::Submodule submodule_on(const std::string& name, const std::string& chart) const;
  /// A named lifting, or an expression list parsed on the chart ring.
  mfh::FrobeniusLifting lifting(const std::string& name) const;
  mfh::FrobeniusLifting parse_lifting(const std::string& chart,
                                      const std::vector<std::string>& images) const;
  /// Liftings per chart id from the document's lifting table (first match per chart).
  std::map<std::string, mfh::FrobeniusLifting> liftings_by_chart() const;

 private:
  FixtureDocument doc_;
  mfh::GluedObject glued_;
  std::map<std::string, mfh::RingPtr> rings_;
};

}  // namespace mfv
