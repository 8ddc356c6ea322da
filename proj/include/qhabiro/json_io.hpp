#pragma once

#include "qhabiro/series.hpp"

#include <json.hpp>

namespace qh {

using json = nlohmann::ordered_json;

json to_json(const QSeries& s);
QSeries series_from_json(const json& j);

Rat rat_from_json(const json& j);
json rat_to_json(Rat r);

}  // namespace qh
