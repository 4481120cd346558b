#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "svcj/dates.hpp"
#include "svcj/errors.hpp"
#include "svcj/simulate.hpp"
#include "svcj/summary.hpp"

namespace svcj {

struct PriceSeries {
    std::vector<Date> dates;   // strictly increasing
    std::vector<double> prices; // > 0

    std::size_t size() const { return dates.size(); }
};

struct ReturnSeries {
    std::vector<Date> dates;    // date of the later price of each pair
    std::vector<double> returns; // scale * ln(S_{t+1}/S_t)
    double scale = 100.0;

    std::size_t size() const { return dates.size(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

// Full-field numeric parse; rejects trailing junk.
inline bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

// 12 significant digits, the library-wide numeric file format.
inline std::string fmt_g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline const std::vector<std::string>& param_csv_header() {
    static const std::vector<std::string> h = [] {
        std::vector<std::string> v{"date"};
        for (const char* n : SvcjParams::names()) v.emplace_back(n);
        for (const char* n : SvcjParams::names()) v.emplace_back(std::string(n) + "_sd");
        return v;
    }();
    return h;
}

} // namespace detail

// Reads a `date,price` CSV (UTF-8, header mandatory, ISO-8601 dates).
inline PriceSeries load_prices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw parse_error(path + ": empty file, expected header 'date,price'");
    {
        const auto header = detail::split_csv(line);
        if (header.size() != 2 || header[0] != "date" || header[1] != "price")
            throw schema_error(path + ": expected header 'date,price'");
    }

    PriceSeries out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv(line);
        const std::string where = path + ":" + std::to_string(line_no);
        if (fields.size() != 2)
            throw parse_error(where + ": expected 2 fields, got " + std::to_string(fields.size()));
        Date d;
        try {
            d = parse_date(fields[0]);
        } catch (const parse_error& e) {
            throw parse_error(where + ": " + e.what());
        }
        double price = 0.0;
        if (!detail::parse_double(fields[1], price) || !std::isfinite(price))
            throw value_error(where + ": non-numeric price '" + fields[1] + "'");
        if (price <= 0.0)
            throw value_error(where + ": price must be positive, got " + fields[1]);
        if (!out.dates.empty()) {
            if (d == out.dates.back())
                throw duplicate_date_error(where + ": duplicate date " + format_date(d));
            if (d < out.dates.back())
                throw order_error(where + ": dates must be strictly increasing");
        }
        out.dates.push_back(d);
        out.prices.push_back(price);
    }
    return out;
}

inline void write_prices(const PriceSeries& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << "date,price\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out << format_date(s.dates[i]) << ',' << detail::fmt_g12(s.prices[i]) << '\n';
    if (!out) throw io_error("write failed on '" + path + "'");
}

// returns[t] = scale * ln(prices[t+1]/prices[t]), dated at t+1.
inline ReturnSeries log_returns(const PriceSeries& prices, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw validation_error("log_returns: scale must be a positive real");
    if (prices.size() < 2)
        throw validation_error("log_returns: need at least 2 prices");
    ReturnSeries out;
    out.scale = scale;
    out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
    out.returns.resize(prices.size() - 1);
    for (std::size_t t = 0; t + 1 < prices.size(); ++t)
        out.returns[t] = scale * std::log(prices.prices[t + 1] / prices.prices[t]);
    return out;
}

// Parameter CSV: date, the ten posterior means, the ten posterior sds.
// Missing rows keep their date and leave all twenty value fields empty.
inline void write_param_series(const ParamTimeSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    const auto& header = detail::param_csv_header();
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << '\n';
    for (std::size_t r = 0; r < series.size(); ++r) {
        out << format_date(series.dates[r]);
        if (series.rows[r]) {
            const auto& row = *series.rows[r];
            for (std::size_t i = 0; i < SvcjParams::kCount; ++i)
                out << ',' << detail::fmt_g12(row.mean[i]);
            for (std::size_t i = 0; i < SvcjParams::kCount; ++i)
                out << ',' << detail::fmt_g12(row.sd[i]);
        } else {
            for (std::size_t i = 0; i < 2 * SvcjParams::kCount; ++i) out << ',';
        }
        out << '\n';
    }
    if (!out) throw io_error("write failed on '" + path + "'");
}

inline ParamTimeSeries read_param_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw parse_error(path + ": empty file");
    {
        const auto header = detail::split_csv(line);
        const auto& expected = detail::param_csv_header();
        if (header != expected) {
            std::ostringstream os;
            os << path << ": parameter CSV schema mismatch; expected columns";
            for (const auto& h : expected) os << " " << h;
            throw schema_error(os.str());
        }
    }

    ParamTimeSeries out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv(line);
        const std::string where = path + ":" + std::to_string(line_no);
        if (fields.size() != 1 + 2 * SvcjParams::kCount)
            throw parse_error(where + ": expected " +
                              std::to_string(1 + 2 * SvcjParams::kCount) + " fields");
        Date d;
        try {
            d = parse_date(fields[0]);
        } catch (const parse_error& e) {
            throw parse_error(where + ": " + e.what());
        }
        if (!out.dates.empty()) {
            if (d == out.dates.back())
                throw duplicate_date_error(where + ": duplicate date " + format_date(d));
            if (d < out.dates.back())
                throw order_error(where + ": dates must be strictly increasing");
        }

        bool all_empty = true;
        for (std::size_t i = 1; i < fields.size(); ++i)
            if (!fields[i].empty()) { all_empty = false; break; }

        out.dates.push_back(d);
        if (all_empty) {
            out.rows.emplace_back(std::nullopt);
            continue;
        }
        PosteriorSummary row;
        for (std::size_t i = 0; i < SvcjParams::kCount; ++i) {
            double x;
            if (!detail::parse_double(fields[1 + i], x))
                throw parse_error(where + ": non-numeric value '" + fields[1 + i] + "'");
            row.mean.at(i) = x;
        }
        for (std::size_t i = 0; i < SvcjParams::kCount; ++i) {
            double x;
            if (!detail::parse_double(fields[1 + SvcjParams::kCount + i], x))
                throw parse_error(where + ": non-numeric value '" +
                                  fields[1 + SvcjParams::kCount + i] + "'");
            row.sd[i] = x;
        }
        out.rows.emplace_back(row);
    }
    return out;
}

// Cluster overlay output: one label per date.
inline void write_cluster_labels(const std::vector<Date>& dates,
                                 const std::vector<int>& labels,
                                 const std::string& path) {
    if (dates.size() != labels.size())
        throw validation_error("write_cluster_labels: dates/labels length mismatch");
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << "date,label\n";
    for (std::size_t i = 0; i < dates.size(); ++i)
        out << format_date(dates[i]) << ',' << labels[i] << '\n';
    if (!out) throw io_error("write failed on '" + path + "'");
}

// Centroids in original units first, scaled (z-score) units alongside.
inline void write_cluster_centroids(const std::vector<std::string>& dim_names,
                                    const std::vector<std::vector<double>>& centroids_raw,
                                    const std::vector<std::vector<double>>& centroids_scaled,
                                    const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << "label";
    for (const auto& n : dim_names) out << ',' << n;
    for (const auto& n : dim_names) out << ',' << n << "_scaled";
    out << '\n';
    for (std::size_t k = 0; k < centroids_raw.size(); ++k) {
        out << k;
        for (double x : centroids_raw[k]) out << ',' << detail::fmt_g12(x);
        for (double x : centroids_scaled[k]) out << ',' << detail::fmt_g12(x);
        out << '\n';
    }
    if (!out) throw io_error("write failed on '" + path + "'");
}

inline void write_elbow_curve(const std::vector<double>& wcss, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << "k,wcss\n";
    for (std::size_t i = 0; i < wcss.size(); ++i)
        out << (i + 1) << ',' << detail::fmt_g12(wcss[i]) << '\n';
    if (!out) throw io_error("write failed on '" + path + "'");
}

// Simulated trajectory with its latent states, one row per step.
inline void write_latent_path(const std::vector<Date>& dates,
                              const std::vector<double>& prices,
                              const LatentPath& path, const std::string& out_path) {
    if (dates.size() != path.size() || prices.size() != path.size())
        throw validation_error("write_latent_path: length mismatch");
    std::ofstream out(out_path);
    if (!out) throw io_error("cannot open '" + out_path + "' for writing");
    out << "date,price,y,v,j,zy,zv\n";
    for (std::size_t t = 0; t < path.size(); ++t) {
        out << format_date(dates[t]) << ',' << detail::fmt_g12(prices[t]) << ','
            << detail::fmt_g12(path.y[t]) << ',' << detail::fmt_g12(path.v[t]) << ','
            << int(path.j[t]) << ',' << detail::fmt_g12(path.zy[t]) << ','
            << detail::fmt_g12(path.zv[t]) << '\n';
    }
    if (!out) throw io_error("write failed on '" + out_path + "'");
}

} // namespace svcj
