#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "blocc/battery.hpp"
#include "blocc/protocols.hpp"
#include "blocc/schmidt.hpp"
#include "blocc/theorems.hpp"
#include "blocc/transfer.hpp"

namespace blocc::io {

using nlohmann::json;

/// Parses text as JSON, rethrowing syntax errors as ValidationError.
json parse(const std::string& text);
json read_file(const std::string& path);

json to_json(const SchmidtVector& v);
SchmidtVector schmidt_from_json(const json& j);

json to_json(const PureEnsemble& e);
PureEnsemble ensemble_from_json(const json& j);

json to_json(const BatteryConfig& c);
BatteryConfig battery_config_from_json(const json& j);

/// {"x": alpha_x} with decimal level keys.
json to_json(const BatteryAmplitudes& a);
BatteryAmplitudes amplitudes_from_json(const json& j);

json to_json(const WorkGrid& g);
WorkGrid grid_from_json(const json& j);

json to_json(const TransferMatrix& t);
TransferMatrix transfer_from_json(const json& j);

json to_json(const TheoremReport& r);
json to_json(const std::vector<TheoremReport>& rs);
json to_json(const ConditionReport& r);
json to_json(const CrooksReport& r);

json to_json(const ConcentrationSpec& s);
ConcentrationSpec concentration_spec_from_json(const json& j);

json to_json(const WorkDistribution& w);

struct LiftReport {
  double row_max_residual;
  double col_max_residual;
  double mapping_residual;
  bool materialized;
};
json to_json(const LiftReport& r);

/// Formats x with 17 significant digits.
std::string format_number(double x);

/// CSV "w,prob", one row per point in increasing w, LF line endings.
void write_work_csv(const WorkDistribution& w, std::ostream& out);
/// CSV "w,ratio" over the Crooks points.
void write_crooks_csv(const CrooksReport& r, std::ostream& out);

}  // namespace blocc::io
