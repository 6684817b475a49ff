#include "metriclab/jsonio.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "metriclab/errors.hpp"

namespace metriclab {

namespace {

Cplx point_of(const ordered_json& j) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError("expected a point as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json point_json(Cplx z) { return ordered_json::array({z.real(), z.imag()}); }

}  // namespace

Domain domain_from_json(const ordered_json& j) {
    std::string kind = j.at("kind").get<std::string>();
    std::string label = j.value("label", kind);
    if (kind == "disk")
        return Domain::disk(point_of(j.value("center", ordered_json::array({0.0, 0.0}))),
                            j.at("radius").get<double>(), label);
    if (kind == "unit_disk") return Domain::unit_disk();
    if (kind == "halfplane")
        return Domain::half_plane(point_of(j.value("origin", ordered_json::array({0.0, 0.0}))),
                                  point_of(j.value("normal", ordered_json::array({0.0, 1.0}))),
                                  label);
    if (kind == "strip") return Domain::strip(j.at("width").get<double>(), label);
    if (kind == "annulus")
        return Domain::annulus(j.at("inner").get<double>(), j.at("outer").get<double>(),
                               point_of(j.value("center", ordered_json::array({0.0, 0.0}))),
                               label);
    if (kind == "punctured_disk")
        return Domain::punctured_disk(point_of(j.value("center", ordered_json::array({0.0, 0.0}))),
                                      j.at("radius").get<double>(), label);
    if (kind == "punctured")
        return Domain::punctured(domain_from_json(j.at("base")), point_of(j.at("puncture")),
                                 label);
    if (kind == "whole_plane") return Domain::whole_plane();
    throw ConfigError("unknown domain kind: " + kind);
}

ordered_json domain_to_json(const Domain& d) {
    ordered_json j;
    switch (d.kind()) {
        case Domain::Kind::Disk:
            j["kind"] = "disk";
            j["center"] = point_json(d.center());
            j["radius"] = d.radius();
            break;
        case Domain::Kind::HalfPlane:
            j["kind"] = "halfplane";
            j["origin"] = point_json(d.hp_origin());
            j["normal"] = point_json(d.hp_normal());
            break;
        case Domain::Kind::Strip:
            j["kind"] = "strip";
            j["width"] = d.width();
            break;
        case Domain::Kind::Annulus:
            j["kind"] = "annulus";
            j["inner"] = d.inner_radius();
            j["outer"] = d.outer_radius();
            j["center"] = point_json(d.center());
            break;
        case Domain::Kind::PuncturedDisk:
            j["kind"] = "punctured_disk";
            j["center"] = point_json(d.center());
            j["radius"] = d.radius();
            break;
        case Domain::Kind::Punctured:
            j["kind"] = "punctured";
            j["base"] = domain_to_json(d.base());
            j["puncture"] = point_json(d.puncture());
            break;
        case Domain::Kind::Generic:
            throw ConfigError("generic domains have no JSON form");
        case Domain::Kind::WholePlane:
            j["kind"] = "whole_plane";
            break;
    }
    j["label"] = d.label();
    return j;
}

namespace {

void dump_rec(const ordered_json& j, std::string& out, int indent, int depth) {
    auto pad = [&](int d) { out.append(static_cast<std::size_t>(d * indent), ' '); };
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                pad(depth + 1);
                out += ordered_json(it.key()).dump();
                out += ": ";
                dump_rec(it.value(), out, indent, depth + 1);
            }
            out += "\n";
            pad(depth);
            out += "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                pad(depth + 1);
                dump_rec(v, out, indent, depth + 1);
            }
            out += "\n";
            pad(depth);
            out += "]";
            return;
        }
        case ordered_json::value_t::number_float: {
            double v = j.get<double>();
            char buf[64];
            if (std::isfinite(v))
                std::snprintf(buf, sizeof(buf), "%.17g", v);
            else
                std::snprintf(buf, sizeof(buf), "null");
            out += buf;
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_json_17(const ordered_json& j, int indent) {
    std::string out;
    dump_rec(j, out, indent, 0);
    out += "\n";
    return out;
}

Cplx parse_point(const std::string& text) {
    double re = 0.0, im = 0.0;
    if (std::sscanf(text.c_str(), "%lf,%lf", &re, &im) != 2)
        throw ConfigError("expected RE,IM but got '" + text + "'");
    return {re, im};
}

}  // namespace metriclab
