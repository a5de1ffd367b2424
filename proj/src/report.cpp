#include "amdrift/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace amdrift {

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string curve_csv(const ForwardCurve& curve) {
    curve.validate();
    std::string out = "u,forward_rate\n";
    for (std::size_t i = 0; i < curve.maturities().size(); ++i) {
        out += format_number(curve.maturities()[i]);
        out += ',';
        out += format_number(curve.rates()[i]);
        out += '\n';
    }
    return out;
}

std::string comparison_csv(const ValuationReport& report) {
    std::string out = "spot,intrinsic,bs_put,crr_put,additive_put,critical_time,deviation\n";
    for (const ComparisonRow& row : report.rows) {
        out += format_number(row.spot);
        out += ',';
        out += format_number(row.intrinsic);
        out += ',';
        out += format_number(row.bs_put);
        out += ',';
        out += format_number(row.crr_put);
        out += ',';
        out += format_number(row.additive_put);
        out += ',';
        out += format_number(row.critical_time);
        out += ',';
        out += format_number(row.deviation);
        out += '\n';
    }
    return out;
}

std::string gamma_theta_csv(const GammaTheta& gt, double t0, int n) {
    if (!gt.gamma || !gt.theta) throw std::invalid_argument("gamma_theta_csv: incomplete coefficients");
    if (n < 1) throw std::invalid_argument("gamma_theta_csv: need at least one interval");
    std::string out = "s,gamma,theta\n";
    const double h = (gt.maturity - t0) / n;
    for (int i = 0; i <= n; ++i) {
        const double s = (i == n) ? gt.maturity : t0 + h * i;
        out += format_number(s);
        out += ',';
        out += format_number(gt.gamma(s));
        out += ',';
        out += format_number(gt.theta(s));
        out += '\n';
    }
    return out;
}

namespace {

std::string escape_json(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

}  // namespace

void JsonObject::add(const std::string& key, double value) {
    fields_.emplace_back(key, format_number(value));
}

void JsonObject::add(const std::string& key, const std::string& value) {
    fields_.emplace_back(key, "\"" + escape_json(value) + "\"");
}

void JsonObject::add(const std::string& key, bool value) {
    fields_.emplace_back(key, value ? "true" : "false");
}

void JsonObject::add_raw(const std::string& key, const std::string& rendered) {
    fields_.emplace_back(key, rendered);
}

std::string JsonObject::str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (i > 0) out += ',';
        out += '"';
        out += escape_json(fields_[i].first);
        out += "\":";
        out += fields_[i].second;
    }
    out += '}';
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) throw std::runtime_error("cannot open for writing: " + tmp.string());
        stream.write(content.data(), static_cast<std::streamsize>(content.size()));
        stream.flush();
        if (!stream) {
            stream.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw std::runtime_error("rename failed for " + target.string() + ": " + ec.message());
    }
}

}  // namespace amdrift
