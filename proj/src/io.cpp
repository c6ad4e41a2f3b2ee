#include "cvxext/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cvxext/errors.hpp"

namespace cvxext {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void bad_name(const std::string& what, const std::string& s) {
    throw config_error("unknown " + what + " \"" + s + "\"");
}

double bound_entry(const json& j, double sign_inf) {
    if (j.is_null()) return sign_inf;
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
        bad_name("bound", s);
    }
    throw config_error("bounds must be numbers, \"inf\"/\"-inf\", or null");
}

Vec parse_bound(const json& j, int dim, double sign_inf) {
    if (j.is_null()) return {};
    Vec out;
    if (j.is_array()) {
        for (const auto& e : j) out.push_back(bound_entry(e, sign_inf));
        if (static_cast<int>(out.size()) != dim)
            throw config_error("bound array length != feature dimension");
    } else {
        out.assign(dim, bound_entry(j, sign_inf));
    }
    bool all_inf = true;
    for (double v : out)
        if (std::isfinite(v)) all_inf = false;
    return all_inf ? Vec{} : out;
}

json bound_to_json(const Vec& b, double sign_inf) {
    if (b.empty()) return nullptr;
    json arr = json::array();
    for (double v : b) {
        if (std::isfinite(v)) arr.push_back(v);
        else arr.push_back(sign_inf > 0 ? "inf" : "-inf");
    }
    return arr;
}

}  // namespace

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

LossKind loss_kind_from_string(const std::string& s) {
    if (s == "hinge") return LossKind::Hinge;
    if (s == "squared_hinge" || s == "sqhinge") return LossKind::SquaredHinge;
    if (s == "logistic") return LossKind::Logistic;
    if (s == "squared_difference" || s == "sqdiff") return LossKind::SquaredDifference;
    bad_name("loss", s);
}

RegKind reg_kind_from_string(const std::string& s) {
    if (s == "l1") return RegKind::L1;
    if (s == "l2") return RegKind::L2;
    bad_name("regularizer", s);
}

Decomposition decomposition_from_string(const std::string& s) {
    if (s == "loss_only") return Decomposition::LossOnly;
    if (s == "full_term") return Decomposition::FullTerm;
    if (s == "logistic_partial") return Decomposition::LogisticPartial;
    bad_name("decomposition", s);
}

ExtensionChoice extension_choice_from_string(const std::string& s) {
    if (s == "trivial") return ExtensionChoice::TrivialExt;
    if (s == "decomposed") return ExtensionChoice::Decomposed;
    if (s == "theorem1") return ExtensionChoice::Theorem1;
    bad_name("extension", s);
}

SurfaceExtension surface_extension_from_string(const std::string& s) {
    if (s == "trivial") return SurfaceExtension::Trivial;
    if (s == "decomposed") return SurfaceExtension::Decomposed;
    if (s == "theorem1") return SurfaceExtension::Theorem1;
    if (s == "logistic-partial" || s == "logistic_partial")
        return SurfaceExtension::LogisticPartial;
    bad_name("extension", s);
}

AxisRange range_from_string(const std::string& s) {
    AxisRange r;
    char extra = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf%c", &r.lo, &r.hi, &r.step, &extra) != 3)
        throw config_error("range \"" + s + "\" is not of the form lo:hi:step");
    return r;
}

Instance parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("instance parse: ") + e.what());
    }
    try {
        Instance inst;
        if (!doc.contains("features") || !doc["features"].is_array() ||
            doc["features"].empty())
            throw config_error("instance: \"features\" must be a nonempty array");
        for (const auto& row : doc["features"]) {
            Vec x;
            if (row.is_number()) x.push_back(row.get<double>());
            else
                for (const auto& e : row) x.push_back(e.get<double>());
            inst.features.push_back(std::move(x));
        }
        const int m = static_cast<int>(inst.features[0].size());

        inst.C = doc.value("C", 1.0);

        if (doc.contains("loss")) {
            const json& l = doc["loss"];
            inst.loss.kind = loss_kind_from_string(l.value("kind", "hinge"));
            inst.loss.c0 = l.value("c0", 1.0);
            inst.loss.c1 = l.value("c1", 1.0);
        }
        if (doc.contains("regularizer")) {
            const json& r = doc["regularizer"];
            inst.reg.kind = reg_kind_from_string(r.value("kind", "l2"));
            inst.reg.half = r.value("half", false);
            inst.reg.lower = parse_bound(r.contains("lower") ? r["lower"] : json(), m, -kInf);
            inst.reg.upper = parse_bound(r.contains("upper") ? r["upper"] : json(), m, kInf);
        }
        if (doc.contains("constraints")) {
            const json& c = doc["constraints"];
            if (c.contains("fixed"))
                for (auto it = c["fixed"].begin(); it != c["fixed"].end(); ++it)
                    inst.labels.fixed[std::stoi(it.key())] = it.value().get<int>();
            if (c.contains("cardinality") && !c["cardinality"].is_null())
                inst.labels.cardinality = c["cardinality"].get<int>();
            if (c.contains("linear"))
                for (const auto& row : c["linear"]) {
                    LinearConstraint lin;
                    for (const auto& e : row.at("coeffs")) lin.coeffs.push_back(e.get<double>());
                    lin.rhs = row.at("rhs").get<double>();
                    inst.labels.linear.push_back(std::move(lin));
                }
        }
        inst.decomposition =
            decomposition_from_string(doc.value("decomposition", "full_term"));
        validate(inst);
        return inst;
    } catch (const json::exception& e) {
        throw config_error(std::string("instance: ") + e.what());
    }
}

std::string serialize_instance(const Instance& inst) {
    json doc;
    doc["features"] = json::array();
    for (const auto& x : inst.features) doc["features"].push_back(x);
    doc["C"] = inst.C;
    doc["loss"] = {{"kind", to_string(inst.loss.kind)},
                   {"c0", inst.loss.c0},
                   {"c1", inst.loss.c1}};
    doc["regularizer"] = {{"kind", to_string(inst.reg.kind)},
                          {"half", inst.reg.half},
                          {"lower", bound_to_json(inst.reg.lower, -1.0)},
                          {"upper", bound_to_json(inst.reg.upper, 1.0)}};
    json fixed = json::object();
    for (const auto& kv : inst.labels.fixed) fixed[std::to_string(kv.first)] = kv.second;
    json linear = json::array();
    for (const auto& lin : inst.labels.linear)
        linear.push_back({{"coeffs", lin.coeffs}, {"rhs", lin.rhs}});
    doc["constraints"] = {
        {"fixed", fixed},
        {"cardinality", inst.labels.cardinality ? json(*inst.labels.cardinality) : json()},
        {"linear", linear}};
    doc["decomposition"] = to_string(inst.decomposition);
    return doc.dump(2) + "\n";
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open instance file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file \"" + path + "\"");
    out << text;
    if (!out) throw config_error("failed writing \"" + path + "\"");
}

}  // namespace cvxext
