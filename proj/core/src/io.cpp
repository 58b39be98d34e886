#include "solvdiff/io.hpp"
#include "solvdiff/errors.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace solvdiff {
namespace io {

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const char* what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ParseError(std::string(what) + ": unknown field '" + it.key() + "'");
    }
}

void check_schema(const json& j, const char* what) {
    if (j.contains("schema") && j.at("schema") != kSchemaVersion)
        throw ParseError(std::string(what) + ": unsupported schema version");
}

double num_field(const json& j, const char* key, const char* what) {
    if (!j.contains(key))
        throw ParseError(std::string(what) + ": missing field '" + key + "'");
    if (!j.at(key).is_number())
        throw ParseError(std::string(what) + ": field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

} // namespace

json to_json(const proc::BaseProcess& p) {
    json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = proc::kind_name(p);
    if (const auto* q = std::get_if<proc::Bessel>(&p)) {
        j["a"] = q->a;
        j["sigma"] = q->sigma;
    } else if (const auto* q = std::get_if<proc::OU>(&p)) {
        j["a"] = q->a;
        j["b"] = q->b;
        j["sigma"] = q->sigma;
    } else if (const auto* q = std::get_if<proc::CIR>(&p)) {
        j["a"] = q->a;
        j["b"] = q->b;
        j["sigma"] = q->sigma;
    } else if (const auto* q = std::get_if<proc::Jacobi>(&p)) {
        j["a"] = q->a;
        j["b"] = q->b;
        j["sigma"] = q->sigma;
        j["A"] = q->A;
    }
    return j;
}

proc::BaseProcess process_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("process: expected a JSON object");
    check_schema(j, "process");
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw ParseError("process: missing string field 'kind'");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "BM") {
        check_keys(j, {"schema", "kind"}, "process(BM)");
        return proc::BM{};
    }
    if (kind == "Bessel") {
        check_keys(j, {"schema", "kind", "a", "sigma"}, "process(Bessel)");
        proc::Bessel q{num_field(j, "a", "Bessel"), num_field(j, "sigma", "Bessel")};
        proc::validate(q);
        return q;
    }
    if (kind == "OU") {
        check_keys(j, {"schema", "kind", "a", "b", "sigma"}, "process(OU)");
        proc::OU q{num_field(j, "a", "OU"), num_field(j, "b", "OU"), num_field(j, "sigma", "OU")};
        proc::validate(q);
        return q;
    }
    if (kind == "CIR") {
        check_keys(j, {"schema", "kind", "a", "b", "sigma"}, "process(CIR)");
        proc::CIR q{num_field(j, "a", "CIR"), num_field(j, "b", "CIR"),
                    num_field(j, "sigma", "CIR")};
        proc::validate(q);
        return q;
    }
    if (kind == "Jacobi") {
        check_keys(j, {"schema", "kind", "a", "b", "sigma", "A"}, "process(Jacobi)");
        proc::Jacobi q{num_field(j, "a", "Jacobi"), num_field(j, "b", "Jacobi"),
                       num_field(j, "sigma", "Jacobi"), num_field(j, "A", "Jacobi")};
        proc::validate(q);
        return q;
    }
    throw ParseError("process: unknown kind '" + kind + "'");
}

json to_json(const xform::StochasticTransform& t) {
    json j;
    j["schema"] = kSchemaVersion;
    j["base"] = to_json(t.base());
    j["base"].erase("schema");
    j["rho"] = t.rho();
    j["c"] = {t.c1(), t.c2(), t.c3(), t.c4()};
    return j;
}

xform::StochasticTransform transform_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("transform: expected a JSON object");
    check_schema(j, "transform");
    check_keys(j, {"schema", "base", "rho", "c"}, "transform");
    if (!j.contains("base")) throw ParseError("transform: missing field 'base'");
    auto base = process_from_json(j.at("base"));
    double rho = num_field(j, "rho", "transform");
    if (!j.contains("c") || !j.at("c").is_array() || j.at("c").size() != 4)
        throw ParseError("transform: field 'c' must be an array [c1,c2,c3,c4]");
    auto c = j.at("c");
    return xform::build_transform(base, rho, c[0].get<double>(), c[1].get<double>(),
                                  c[2].get<double>(), c[3].get<double>());
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open '" + path + "' for reading");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IOError("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

proc::BaseProcess load_process(const std::string& path) {
    return process_from_json(load_json(path));
}

xform::StochasticTransform load_transform(const std::string& path) {
    return transform_from_json(load_json(path));
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace io
} // namespace solvdiff
