#include "stepfit/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "stepfit/cost.hpp"

namespace stepfit {

namespace {

using nlohmann::json;

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

[[noreturn]] void fail_line(const std::string& name, std::size_t line,
                            const std::string& what) {
    throw std::runtime_error(name + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& name, std::size_t line,
                    const std::string& field) {
    const char* s = field.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (end == s || (end && *end))
        fail_line(name, line, "bad number '" + field + "'");
    if (!std::isfinite(v)) fail_line(name, line, "nonfinite value '" + field + "'");
    return v;
}

CostModel parse_model(const std::string& s) {
    if (s == "linear") return CostModel::Linear;
    if (s == "squared") return CostModel::Squared;
    throw std::runtime_error("unknown cost model '" + s + "'");
}

const char* model_name(CostModel m) {
    return m == CostModel::Squared ? "squared" : "linear";
}

}  // namespace

Instance parse_csv(const std::string& text, const std::string& name) {
    Instance inst;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    int next_id = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (trimmed.empty() || trimmed[0] == '#') continue;
        if (next_id == 0 && trimmed.find_first_not_of("xyw, \t") == std::string::npos)
            continue;  // optional "x,y,w" header
        std::vector<std::string> fields;
        std::string cur;
        for (char c : trimmed) {
            if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        fields.push_back(cur);
        if (fields.size() < 2 || fields.size() > 3)
            fail_line(name, lineno, "expected 'x,y[,w]'");
        WeightedPoint p;
        p.x = parse_number(name, lineno, fields[0]);
        p.y = parse_number(name, lineno, fields[1]);
        p.w = fields.size() == 3 ? parse_number(name, lineno, fields[2]) : 1.0;
        if (!(p.w > 0.0)) fail_line(name, lineno, "weight must be positive");
        p.id = next_id++;
        inst.points.push_back(p);
    }
    if (inst.points.empty())
        throw std::runtime_error(name + ": no points found");
    return inst;
}

Instance parse_json(const std::string& text, const std::string& name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(name + ": " + e.what());
    }
    Instance inst;
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
        throw std::runtime_error(name + ": expected object with a 'points' array");
    int next_id = 0;
    for (const json& jp : j["points"]) {
        WeightedPoint p;
        p.x = jp.at("x").get<double>();
        p.y = jp.at("y").get<double>();
        p.w = jp.value("w", 1.0);
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.w))
            throw std::runtime_error(name + ": nonfinite value in point " +
                                     std::to_string(next_id));
        if (!(p.w > 0.0))
            throw std::runtime_error(name + ": nonpositive weight in point " +
                                     std::to_string(next_id));
        p.id = next_id++;
        inst.points.push_back(p);
    }
    if (inst.points.empty()) throw std::runtime_error(name + ": no points found");
    inst.k = j.value("k", std::size_t{1});
    if (j.contains("model")) inst.model = parse_model(j["model"].get<std::string>());
    return inst;
}

Instance load_instance(const std::string& path, const std::string& format) {
    std::string fmt_eff = format;
    if (fmt_eff == "auto") {
        auto dot = path.rfind('.');
        std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
        fmt_eff = (ext == "json") ? "json" : "csv";
    }
    std::string text = read_file(path);
    if (fmt_eff == "json") return parse_json(text, path);
    if (fmt_eff == "csv") return parse_csv(text, path);
    throw std::runtime_error("unknown instance format '" + format + "'");
}

std::string instance_to_json(const Instance& inst) {
    json j;
    j["k"] = inst.k;
    j["model"] = model_name(inst.model);
    json pts = json::array();
    for (const WeightedPoint& p : inst.points)
        pts.push_back({{"x", p.x}, {"y", p.y}, {"w", p.w}});
    j["points"] = std::move(pts);
    return j.dump(2) + "\n";
}

std::string instance_to_csv(const Instance& inst) {
    std::string out = "x,y,w\n";
    for (const WeightedPoint& p : inst.points) {
        out += fmt("%.17g", p.x);
        out += ',';
        out += fmt("%.17g", p.y);
        out += ',';
        out += fmt("%.17g", p.w);
        out += '\n';
    }
    return out;
}

FitOutput make_fit_output(const Instance& inst, const FitReport& report,
                          const std::string& engine) {
    FitOutput out;
    out.cost = report.cost;
    out.segments = report.fit.segments;
    out.engine = engine;
    out.diagnostics = report.diagnostics;
    std::vector<double> xs;
    xs.reserve(inst.points.size());
    for (const WeightedPoint& p : inst.points) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < out.segments.size(); ++i) {
        double b = out.segments[i].x_right;
        out.boundaries.push_back(static_cast<std::size_t>(
            std::lower_bound(xs.begin(), xs.end(), b) - xs.begin()));
    }
    return out;
}

std::string fit_to_json(const FitOutput& out) {
    json j;
    j["cost"] = out.cost;
    j["engine"] = out.engine;
    json segs = json::array();
    for (const Segment& s : out.segments)
        segs.push_back({{"x_left", s.x_left}, {"x_right", s.x_right}, {"y", s.y}});
    j["segments"] = std::move(segs);
    j["boundaries"] = out.boundaries;
    j["diagnostics"] = {
        {"rounds", out.diagnostics.rounds},
        {"pruned_per_round", out.diagnostics.pruned_per_round},
        {"big_partition_indices", out.diagnostics.big_partition_indices},
        {"wall_ms", out.diagnostics.wall_ms},
        {"prune_events", out.diagnostics.prune_log.size()},
    };
    return j.dump(2) + "\n";
}

std::string fit_to_tsv(const FitOutput& out) {
    std::string s = "# cost=" + fmt("%.17g", out.cost) + "\n";
    for (const Segment& seg : out.segments) {
        s += fmt("%.17g", seg.x_left);
        s += '\t';
        s += fmt("%.17g", seg.x_right);
        s += '\t';
        s += fmt("%.17g", seg.y);
        s += '\n';
    }
    return s;
}

std::string render_svg(const FitOutput& out, const Instance& inst) {
    constexpr double kW = 800.0, kH = 500.0, kPad = 40.0;
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0, wmax = 1.0;
    bool first = true;
    for (const WeightedPoint& p : inst.points) {
        if (first) {
            xmin = xmax = p.x;
            ymin = ymax = p.y;
            first = false;
        }
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
        wmax = std::max(wmax, p.w);
    }
    for (const Segment& s : out.segments) {
        ymin = std::min(ymin, s.y);
        ymax = std::max(ymax, s.y);
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    auto sx = [&](double x) {
        return kPad + (x - xmin) / (xmax - xmin) * (kW - 2 * kPad);
    };
    auto sy = [&](double y) {
        return kH - kPad - (y - ymin) / (ymax - ymin) * (kH - 2 * kPad);
    };

    StepFunction f{out.segments};
    double level = 0.0;
    for (const WeightedPoint& p : inst.points)
        level = std::max(level, point_cost(p, f.value(p.x), inst.model));
    double band = kDefaultTol * (1.0 + level);

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.6g", kW) +
           "\" height=\"" + fmt("%.6g", kH) + "\" viewBox=\"0 0 " + fmt("%.6g", kW) +
           " " + fmt("%.6g", kH) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const Segment& s : out.segments) {
        svg += "<line x1=\"" + fmt("%.6g", sx(s.x_left)) + "\" y1=\"" +
               fmt("%.6g", sy(s.y)) + "\" x2=\"" + fmt("%.6g", sx(s.x_right)) +
               "\" y2=\"" + fmt("%.6g", sy(s.y)) +
               "\" stroke=\"#1f77b4\" stroke-width=\"3\"/>\n";
    }
    for (const WeightedPoint& p : inst.points) {
        bool critical = point_cost(p, f.value(p.x), inst.model) >= level - band;
        double r = 2.0 + 4.0 * (p.w / wmax);
        svg += "<circle cx=\"" + fmt("%.6g", sx(p.x)) + "\" cy=\"" +
               fmt("%.6g", sy(p.y)) + "\" r=\"" + fmt("%.6g", r) + "\" fill=\"" +
               (critical ? "#d62728" : "#555555") + "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream outf(path, std::ios::binary);
    if (!outf) throw std::runtime_error("cannot write '" + path + "'");
    outf << content;
}

}  // namespace stepfit
