// JSON interchange: the corrlab-behavior/1 and corrlab-hvmodel/1 documents
// plus verdict serialization. Read errors name the first offending field.
#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "corrlab/behavior.hpp"
#include "corrlab/classifier.hpp"
#include "corrlab/hv.hpp"

namespace corrlab {

using json = nlohmann::json;

inline constexpr const char* kBehaviorFormat = "corrlab-behavior/1";
inline constexpr const char* kModelFormat = "corrlab-hvmodel/1";

struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& field, const std::string& why)
        : std::runtime_error("malformed document: field '" + field + "': " + why), field_name(field) {}
    std::string field_name;
};

// Contexts in (x,y) lexicographic order; p_pm means p(a=+1, b=-1 | x,y).
inline json behavior_to_json(const Behavior& b) {
    json contexts = json::array();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            contexts.push_back({{"x", x},
                                {"y", y},
                                {"p_pp", b.at(x, y, +1, +1)},
                                {"p_pm", b.at(x, y, +1, -1)},
                                {"p_mp", b.at(x, y, -1, +1)},
                                {"p_mm", b.at(x, y, -1, -1)}});
    return json{{"format", kBehaviorFormat}, {"contexts", std::move(contexts)}};
}

namespace detail {

inline double number_field(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw FormatError(path + "." + key, "missing");
    if (!it->is_number()) throw FormatError(path + "." + key, "not a number");
    return it->get<double>();
}

}  // namespace detail

inline Behavior behavior_from_json(const json& doc) {
    if (!doc.is_object()) throw FormatError("(root)", "not a JSON object");
    const auto fmt = doc.find("format");
    if (fmt == doc.end()) throw FormatError("format", "missing");
    if (!fmt->is_string() || fmt->get<std::string>() != kBehaviorFormat)
        throw FormatError("format", "expected \"" + std::string(kBehaviorFormat) + "\"");
    const auto ctx = doc.find("contexts");
    if (ctx == doc.end()) throw FormatError("contexts", "missing");
    if (!ctx->is_array() || ctx->size() != 4)
        throw FormatError("contexts", "expected an array of 4 contexts");

    Behavior b;
    for (int k = 0; k < 4; ++k) {
        const std::string path = "contexts[" + std::to_string(k) + "]";
        const json& c = (*ctx)[static_cast<size_t>(k)];
        if (!c.is_object()) throw FormatError(path, "not an object");
        const int x = k / 2, y = k % 2;
        const auto check_setting = [&](const char* key, int expect) {
            const auto it = c.find(key);
            if (it == c.end()) throw FormatError(path + "." + key, "missing");
            if (!it->is_number_integer() || it->get<int>() != expect)
                throw FormatError(path + "." + key,
                                  "expected " + std::to_string(expect) + " (lexicographic context order)");
        };
        check_setting("x", x);
        check_setting("y", y);
        b.at(x, y, +1, +1) = detail::number_field(c, path, "p_pp");
        b.at(x, y, +1, -1) = detail::number_field(c, path, "p_pm");
        b.at(x, y, -1, +1) = detail::number_field(c, path, "p_mp");
        b.at(x, y, -1, -1) = detail::number_field(c, path, "p_mm");
    }
    return b;
}

inline json model_to_json(const HVModel& m) {
    json weights = json::array();
    json ra = json::array();
    json rb = json::array();
    for (size_t i = 0; i < m.size(); ++i) {
        weights.push_back(m.weights[i]);
        ra.push_back({{m.respond_a[i][0][0], m.respond_a[i][0][1]},
                      {m.respond_a[i][1][0], m.respond_a[i][1][1]}});
        rb.push_back({{m.respond_b[i][0][0], m.respond_b[i][0][1]},
                      {m.respond_b[i][1][0], m.respond_b[i][1][1]}});
    }
    return json{{"format", kModelFormat},
                {"weights", std::move(weights)},
                {"respond_a", std::move(ra)},
                {"respond_b", std::move(rb)}};
}

// The document carries no signature flags: the dependency declaration is
// derived from the tables, so local models must carry constant remote slices.
inline HVModel model_from_json(const json& doc) {
    if (!doc.is_object()) throw FormatError("(root)", "not a JSON object");
    const auto fmt = doc.find("format");
    if (fmt == doc.end()) throw FormatError("format", "missing");
    if (!fmt->is_string() || fmt->get<std::string>() != kModelFormat)
        throw FormatError("format", "expected \"" + std::string(kModelFormat) + "\"");
    const auto weights = doc.find("weights");
    if (weights == doc.end()) throw FormatError("weights", "missing");
    if (!weights->is_array() || weights->empty()) throw FormatError("weights", "expected a non-empty array");
    const size_t k = weights->size();

    HVModel m;
    for (size_t i = 0; i < k; ++i) {
        const json& w = (*weights)[i];
        if (!w.is_number()) throw FormatError("weights[" + std::to_string(i) + "]", "not a number");
        m.weights.push_back(w.get<double>());
        m.lambdas.push_back(static_cast<int>(i));
    }

    const auto read_table = [&](const char* name) {
        const auto tbl = doc.find(name);
        if (tbl == doc.end()) throw FormatError(name, "missing");
        if (!tbl->is_array() || tbl->size() != k)
            throw FormatError(name, "expected an array of " + std::to_string(k) + " tables");
        std::vector<ResponseTable> out(k);
        for (size_t i = 0; i < k; ++i) {
            const json& t = (*tbl)[i];
            const std::string base = std::string(name) + "[" + std::to_string(i) + "]";
            if (!t.is_array() || t.size() != 2) throw FormatError(base, "expected a 2x2 table");
            for (int own = 0; own < 2; ++own) {
                const json& row = t[static_cast<size_t>(own)];
                if (!row.is_array() || row.size() != 2)
                    throw FormatError(base + "[" + std::to_string(own) + "]", "expected 2 entries");
                for (int remote = 0; remote < 2; ++remote) {
                    const json& cell = row[static_cast<size_t>(remote)];
                    const std::string field =
                        base + "[" + std::to_string(own) + "][" + std::to_string(remote) + "]";
                    if (!cell.is_number_integer()) throw FormatError(field, "not an integer");
                    const int val = cell.get<int>();
                    if (val != 1 && val != -1) throw FormatError(field, "must be +1 or -1");
                    out[i][own][remote] = val;
                }
            }
        }
        return out;
    };
    m.respond_a = read_table("respond_a");
    m.respond_b = read_table("respond_b");
    m.a_depends_on_y = detail::table_a_depends_on_remote(m);
    m.b_depends_on_x = detail::table_b_depends_on_remote(m);
    return m;
}

inline json verdict_to_json(const Verdict& v) {
    json j{{"tier", to_string(v.tier)},
           {"s_max", v.s_max},
           {"chsh", v.chsh},
           {"ns_residual", v.ns_max_residual},
           {"lp_weights", nullptr},
           {"npa1", nullptr},
           {"tlm", nullptr}};
    if (v.lp_weights) j["lp_weights"] = *v.lp_weights;
    if (v.npa1) j["npa1"] = {{"u", v.npa1->u}, {"v", v.npa1->v}, {"min_eig", v.npa1->min_eig}};
    if (v.tlm) j["tlm"] = *v.tlm;
    return j;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw FormatError("(json)", e.what());
    }
    return doc;
}

inline Behavior load_behavior(const std::string& path) { return behavior_from_json(load_json_file(path)); }

inline void save_json(const json& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace corrlab
