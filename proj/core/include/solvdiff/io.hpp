#ifndef SOLVDIFF_IO_HPP
#define SOLVDIFF_IO_HPP

#include "solvdiff/processes.hpp"
#include "solvdiff/transform.hpp"

#include <json.hpp>

#include <string>

namespace solvdiff {
namespace io {

using json = nlohmann::json;

// Schema version written into every JSON artifact; readers accept an absent
// field as version 1 and reject anything else, as well as unknown keys.
constexpr int kSchemaVersion = 1;

json to_json(const proc::BaseProcess& p);
proc::BaseProcess process_from_json(const json& j);

json to_json(const xform::StochasticTransform& t);
xform::StochasticTransform transform_from_json(const json& j);

proc::BaseProcess load_process(const std::string& path);
xform::StochasticTransform load_transform(const std::string& path);
json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);

// Fixed 17-significant-digit decimal rendering used in all CSV output.
std::string g17(double v);

} // namespace io
} // namespace solvdiff

#endif
