#pragma once

#include "gpftk/arith.hpp"
#include "gpftk/bounds.hpp"
#include "gpftk/ellcurve.hpp"
#include "gpftk/families.hpp"
#include "gpftk/integer.hpp"
#include "gpftk/polyz.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <charconv>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

namespace gpftk::scan {

enum class RowFlag { ok, zero_value, bad_fiber, factor_cap };

inline std::string to_string(RowFlag f) {
    switch (f) {
        case RowFlag::ok: return "ok";
        case RowFlag::zero_value: return "zero_value";
        case RowFlag::bad_fiber: return "bad_fiber";
        case RowFlag::factor_cap: return "factor_cap";
    }
    return "?";
}

struct ScanRecord {
    std::int64_t n = 0;
    std::optional<Int> f_n;
    std::optional<Int> gpf;
    std::optional<Int> rad;
    std::optional<Int> val_product;
    std::optional<Int> delta_min;
    std::optional<Int> conductor;
    std::optional<double> szpiro_ratio;
    std::optional<double> kappa_emp;
    std::map<std::string, double> bound_columns;  // emitted in JSON only
    RowFlag flag = RowFlag::ok;
    std::optional<Rational> quasi_ratio;  // family scans; summary input
};

inline std::string csv_header() {
    return "n,f_n,gpf,rad,val_product,delta_min,conductor,szpiro_ratio,kappa_emp,flags";
}

namespace detail {

inline std::string fmt_double(double v) {
    std::array<char, 64> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline std::string fmt_double_hex(double v) {
    std::array<char, 64> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::hex);
    return std::string(buf.data(), res.ptr);
}

inline double parse_double_hex(const std::string& s) {
    return std::strtod(("0x" + s).c_str(), nullptr);
}

inline std::string opt_int(const std::optional<Int>& v) { return v ? v->str() : std::string(); }

inline std::string opt_dbl(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); }

}  // namespace detail

inline std::string to_csv(const ScanRecord& r) {
    std::string out;
    out += std::to_string(r.n);
    out += ',';
    out += detail::opt_int(r.f_n);
    out += ',';
    out += detail::opt_int(r.gpf);
    out += ',';
    out += detail::opt_int(r.rad);
    out += ',';
    out += detail::opt_int(r.val_product);
    out += ',';
    out += detail::opt_int(r.delta_min);
    out += ',';
    out += detail::opt_int(r.conductor);
    out += ',';
    out += detail::opt_dbl(r.szpiro_ratio);
    out += ',';
    out += detail::opt_dbl(r.kappa_emp);
    out += ',';
    out += to_string(r.flag);
    return out;
}

inline std::string to_json(const ScanRecord& r) {
    std::string out = "{\"n\":" + std::to_string(r.n);
    auto add_int = [&](const char* key, const std::optional<Int>& v) {
        if (v) out += std::string(",\"") + key + "\":\"" + v->str() + "\"";
    };
    auto add_dbl = [&](const char* key, const std::optional<double>& v) {
        if (v) out += std::string(",\"") + key + "\":" + detail::fmt_double(*v);
    };
    add_int("f_n", r.f_n);
    add_int("gpf", r.gpf);
    add_int("rad", r.rad);
    add_int("val_product", r.val_product);
    add_int("delta_min", r.delta_min);
    add_int("conductor", r.conductor);
    add_dbl("szpiro_ratio", r.szpiro_ratio);
    add_dbl("kappa_emp", r.kappa_emp);
    if (!r.bound_columns.empty()) {
        out += ",\"bounds\":{";
        bool first = true;
        for (const auto& [k, v] : r.bound_columns) {
            if (!first) out += ',';
            first = false;
            out += "\"" + k + "\":" + detail::fmt_double(v);
        }
        out += "}";
    }
    out += ",\"flags\":\"" + to_string(r.flag) + "\"}";
    return out;
}

// Accumulated scan summary; all merging happens in chunk order, so the
// result is independent of the chunking itself.
struct SummaryState {
    std::uint64_t rows_ok = 0, rows_zero = 0, rows_bad_fiber = 0, rows_capped = 0;

    // gpf scans: strictly decreasing running minima of the gpf column
    std::vector<std::pair<std::int64_t, Int>> minima;

    // family scans
    bool has_kappa = false;
    double max_kappa = 0;
    std::int64_t max_kappa_n = 0;
    bool has_szpiro = false;
    double max_szpiro = 0;
    std::int64_t max_szpiro_n = 0;
    std::set<std::string> quasi_ratios;

    // condition scans
    bool has_mu = false;
    double max_mu = 0;
    std::int64_t max_mu_n = 0;
    static constexpr int kMuBins = 21;  // [0, 0.05) ... [0.95, 1.0), [1.0, inf)
    std::array<std::uint64_t, kMuBins> mu_histogram{};

    void absorb_row(const ScanRecord& r) {
        switch (r.flag) {
            case RowFlag::ok: ++rows_ok; break;
            case RowFlag::zero_value: ++rows_zero; break;
            case RowFlag::bad_fiber: ++rows_bad_fiber; break;
            case RowFlag::factor_cap: ++rows_capped; break;
        }
        if (r.gpf && (minima.empty() || *r.gpf < minima.back().second))
            minima.emplace_back(r.n, *r.gpf);
        if (r.kappa_emp && (!has_kappa || *r.kappa_emp > max_kappa)) {
            has_kappa = true;
            max_kappa = *r.kappa_emp;
            max_kappa_n = r.n;
        }
        if (r.szpiro_ratio && (!has_szpiro || *r.szpiro_ratio > max_szpiro)) {
            has_szpiro = true;
            max_szpiro = *r.szpiro_ratio;
            max_szpiro_n = r.n;
        }
        if (r.quasi_ratio) {
            Rational q = *r.quasi_ratio < 0 ? Rational(-*r.quasi_ratio) : *r.quasi_ratio;
            quasi_ratios.insert(q.str());
        }
        if (r.flag == RowFlag::ok && r.f_n && abs_int(*r.f_n) >= 2 && r.val_product && r.rad) {
            double mu = (*r.val_product == 1) ? 0.0 : log_abs(*r.val_product) / log_abs(*r.rad);
            if (!has_mu || mu > max_mu) {
                has_mu = true;
                max_mu = mu;
                max_mu_n = r.n;
            }
            int bin = mu >= 1.0 ? kMuBins - 1 : static_cast<int>(mu / 0.05);
            mu_histogram[static_cast<std::size_t>(std::min(bin, kMuBins - 1))]++;
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["rows_ok"] = rows_ok;
        j["rows_zero"] = rows_zero;
        j["rows_bad_fiber"] = rows_bad_fiber;
        j["rows_capped"] = rows_capped;
        nlohmann::json mins = nlohmann::json::array();
        for (const auto& [n, g] : minima) mins.push_back({n, g.str()});
        j["minima"] = mins;
        j["has_kappa"] = has_kappa;
        j["max_kappa"] = detail::fmt_double_hex(max_kappa);
        j["max_kappa_n"] = max_kappa_n;
        j["has_szpiro"] = has_szpiro;
        j["max_szpiro"] = detail::fmt_double_hex(max_szpiro);
        j["max_szpiro_n"] = max_szpiro_n;
        j["quasi_ratios"] = quasi_ratios;
        j["has_mu"] = has_mu;
        j["max_mu"] = detail::fmt_double_hex(max_mu);
        j["max_mu_n"] = max_mu_n;
        j["mu_histogram"] = mu_histogram;
        return j;
    }

    static SummaryState from_json(const nlohmann::json& j) {
        SummaryState s;
        s.rows_ok = j.at("rows_ok");
        s.rows_zero = j.at("rows_zero");
        s.rows_bad_fiber = j.at("rows_bad_fiber");
        s.rows_capped = j.at("rows_capped");
        for (const auto& m : j.at("minima"))
            s.minima.emplace_back(m.at(0).get<std::int64_t>(), Int(m.at(1).get<std::string>()));
        s.has_kappa = j.at("has_kappa");
        s.max_kappa = detail::parse_double_hex(j.at("max_kappa"));
        s.max_kappa_n = j.at("max_kappa_n");
        s.has_szpiro = j.at("has_szpiro");
        s.max_szpiro = detail::parse_double_hex(j.at("max_szpiro"));
        s.max_szpiro_n = j.at("max_szpiro_n");
        for (const auto& q : j.at("quasi_ratios")) s.quasi_ratios.insert(q.get<std::string>());
        s.has_mu = j.at("has_mu");
        s.max_mu = detail::parse_double_hex(j.at("max_mu"));
        s.max_mu_n = j.at("max_mu_n");
        int i = 0;
        for (const auto& b : j.at("mu_histogram")) s.mu_histogram[static_cast<std::size_t>(i++)] = b;
        return s;
    }
};

struct ScanConfig {
    enum class Kind { gpf, family, condition };
    Kind kind = Kind::gpf;
    poly::IntPoly F;                               // gpf / condition scans
    std::optional<families::SurfaceSpec> surface;  // family scans
    std::int64_t from = 0, to = 0;
    std::string format = "csv";  // csv | json
    std::string out_path;        // empty: stdout, checkpointing disabled
    int chunk_size = 1024;
    int threads = 1;
    arith::FactorConfig factor;
    bool with_bound_columns = true;

    // test hook: simulate a kill while writing this chunk (half the payload
    // is flushed, then _exit), leaving a stale checkpoint behind
    std::int64_t abort_during_chunk = -1;

    std::string checkpoint_path() const { return out_path + ".ckpt"; }

    std::string canonical_string() const {
        std::string s = "v1|";
        switch (kind) {
            case Kind::gpf: s += "kind=gpf"; break;
            case Kind::family: s += "kind=family"; break;
            case Kind::condition: s += "kind=condition"; break;
        }
        if (kind == Kind::family) {
            s += "|A=";
            for (const auto& c : surface->A.coeffs()) s += c.str() + ";";
            s += "|B=";
            for (const auto& c : surface->B.coeffs()) s += c.str() + ";";
        } else {
            s += "|F=";
            for (const auto& c : F.coeffs()) s += c.str() + ";";
        }
        s += "|from=" + std::to_string(from) + "|to=" + std::to_string(to);
        s += "|format=" + format + "|chunk=" + std::to_string(chunk_size);
        s += "|seed=" + std::to_string(factor.seed) + "|cap=" + std::to_string(factor.max_rho_iterations);
        return s;
    }

    std::string digest() const {  // FNV-1a 64
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : canonical_string()) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }
};

namespace detail {

inline void add_factor_columns(ScanRecord& rec, const Int& value, const arith::FactorConfig& cfg) {
    arith::Factorization fac = arith::factorize(value, cfg);
    Int rad = 1, vp = 1;
    for (const auto& pp : fac.factors) {
        rad *= pp.prime;
        vp *= pp.exponent;
    }
    rec.gpf = fac.factors.empty() ? Int(1) : fac.factors.back().prime;
    rec.rad = rad;
    rec.val_product = vp;
}

inline ScanRecord gpf_row(const poly::IntPoly& F, std::int64_t n, const ScanConfig& cfg) {
    ScanRecord rec;
    rec.n = n;
    Int v = F.eval(n);
    if (v == 0) {
        rec.f_n = v;
        rec.flag = RowFlag::zero_value;
        return rec;
    }
    rec.f_n = v;
    try {
        add_factor_columns(rec, v, cfg.factor);
    } catch (const effort_error&) {
        rec.flag = RowFlag::factor_cap;
        return rec;
    }
    if (cfg.with_bound_columns && n >= 2) {
        auto nd = static_cast<double>(n);
        rec.bound_columns["gpf_shape_k1"] = bounds::gpf_shape(nd, 1.0);
        rec.bound_columns["stewart_yu_shape"] = bounds::stewart_yu_shape(nd);
    }
    return rec;
}

inline ScanRecord family_row(const families::SurfaceSpec& s, std::int64_t n, const ScanConfig& cfg) {
    ScanRecord rec;
    rec.n = n;
    Int d = s.D.eval(n);
    rec.f_n = d;
    if (s.in_sigma(n)) {
        rec.flag = RowFlag::bad_fiber;
        return rec;
    }
    ell::WeierstrassModel E = families::fiber(s, n);
    if (ell::invariants(E).delta != d)
        throw internal_error("family scan: fiber discriminant differs from D(n)");
    try {
        add_factor_columns(rec, d, cfg.factor);
        ell::GlobalInvariants g = ell::conductor(E, cfg.factor);
        rec.delta_min = g.delta_min;
        rec.conductor = g.conductor;
        rec.szpiro_ratio = ell::szpiro_ratio(g);
        if (g.conductor >= 3) {
            double logN = log_abs(g.conductor);
            double inner = std::max(log_abs(g.delta_min), 1.0 + 1e-9);
            rec.kappa_emp = std::log(inner) / std::sqrt(logN * bounds::iter_log(2, static_cast<double>(g.conductor)));
        }
        rec.quasi_ratio = Rational(d) / Rational(g.delta_min);
        if (!divides(*rec.rad, s.rho * g.conductor))
            throw internal_error("family scan: rad(D(n)) does not divide rho*N at n = " +
                                 std::to_string(n));
        if (cfg.with_bound_columns && g.conductor >= 2)
            rec.bound_columns["szpiro_shape_k1"] =
                bounds::szpiro_shape(static_cast<double>(g.conductor), 1.0);
    } catch (const effort_error&) {
        rec = ScanRecord{};
        rec.n = n;
        rec.f_n = d;
        rec.flag = RowFlag::factor_cap;
    }
    return rec;
}

inline ScanRecord compute_row(const ScanConfig& cfg, std::int64_t n) {
    if (cfg.kind == ScanConfig::Kind::family) return family_row(*cfg.surface, n, cfg);
    return gpf_row(cfg.F, n, cfg);
}

struct ChunkResult {
    std::string payload;
    SummaryState local;  // used only to pre-serialize rows; merged via records
    std::vector<ScanRecord> records;
};

}  // namespace detail

struct ScanOutcome {
    SummaryState summary;
    std::uint64_t rows = 0;
    bool resumed = false;
    std::string digest;
};

// Chunked scan driver: disjoint chunks are computed (possibly in parallel),
// serialized rows are written in chunk order by this single writer, and the
// checkpoint is updated only after a chunk's rows are on disk.
class ScanRunner {
public:
    explicit ScanRunner(ScanConfig cfg) : cfg_(std::move(cfg)) {
        if (cfg_.from > cfg_.to) throw usage_error("scan range is empty (from > to)");
        if (cfg_.kind != ScanConfig::Kind::family && cfg_.F.is_constant())
            throw usage_error("scan polynomial must be nonconstant");
        if (cfg_.kind == ScanConfig::Kind::condition && poly::distinct_root_count(cfg_.F) < 2)
            throw domain_error(
                "condition check rejected: the polynomial must have at least two distinct "
                "complex roots");
        if (cfg_.format != "csv" && cfg_.format != "json")
            throw usage_error("format must be csv or json");
        if (cfg_.chunk_size < 1) throw usage_error("chunk size must be positive");
        if (cfg_.threads < 1) cfg_.threads = 1;
    }

    ScanOutcome run(bool resume = false) {
        const std::int64_t total = cfg_.to - cfg_.from + 1;
        const std::int64_t n_chunks = (total + cfg_.chunk_size - 1) / cfg_.chunk_size;

        SummaryState summary;
        std::uint64_t rows = 0;
        std::int64_t first_chunk = 0;

        if (cfg_.out_path.empty()) {
            if (resume) throw usage_error("resume requires --out");
            write_preamble_stdout();
            run_chunks(0, n_chunks, summary, rows, nullptr);
            write_postamble_stdout();
            return {summary, rows, false, cfg_.digest()};
        }

        std::fstream file;
        if (resume) {
            auto ck = load_checkpoint();
            summary = SummaryState::from_json(ck.at("summary"));
            rows = ck.at("rows").get<std::uint64_t>();
            std::int64_t upto = ck.at("completed_upto").get<std::int64_t>();
            std::uint64_t offset = ck.at("byte_offset").get<std::uint64_t>();
            first_chunk = (upto - cfg_.from + 1) / cfg_.chunk_size;
            file.open(cfg_.out_path, std::ios::in | std::ios::out | std::ios::binary);
            if (!file) throw usage_error("cannot open output file for resume: " + cfg_.out_path);
            file.seekg(0, std::ios::end);
            if (static_cast<std::uint64_t>(file.tellg()) < offset)
                throw usage_error("output file is shorter than the checkpoint offset");
            file.close();
            std::filesystem::resize_file(cfg_.out_path, offset);
            file.open(cfg_.out_path, std::ios::in | std::ios::out | std::ios::binary);
            file.seekp(0, std::ios::end);
        } else {
            file.open(cfg_.out_path, std::ios::out | std::ios::trunc | std::ios::binary);
            if (!file) throw usage_error("cannot open output file: " + cfg_.out_path);
            file << preamble();
            file.flush();
            write_checkpoint(file, summary, rows, cfg_.from - 1);
        }

        run_chunks(first_chunk, n_chunks, summary, rows, &file);
        file << postamble();
        file.flush();
        return {summary, rows, resume, cfg_.digest()};
    }

private:
    std::string preamble() const { return cfg_.format == "csv" ? csv_header() + "\n" : "[\n"; }

    std::string postamble() const { return cfg_.format == "csv" ? "" : "\n]\n"; }

    void write_preamble_stdout() const { std::fputs(preamble().c_str(), stdout); }

    void write_postamble_stdout() const { std::fputs(postamble().c_str(), stdout); }

    detail::ChunkResult compute_chunk(std::int64_t k) const {
        detail::ChunkResult out;
        std::int64_t lo = cfg_.from + k * cfg_.chunk_size;
        std::int64_t hi = std::min(cfg_.to, lo + cfg_.chunk_size - 1);
        bool any_before = lo > cfg_.from;
        for (std::int64_t n = lo; n <= hi; ++n) {
            ScanRecord rec = detail::compute_row(cfg_, n);
            if (cfg_.format == "csv") {
                out.payload += to_csv(rec);
                out.payload += '\n';
            } else {
                if (any_before || n > lo) out.payload += ",\n";
                out.payload += "  " + to_json(rec);
            }
            out.records.push_back(std::move(rec));
        }
        return out;
    }

    void run_chunks(std::int64_t first, std::int64_t n_chunks, SummaryState& summary,
                    std::uint64_t& rows, std::fstream* file) {
        std::deque<std::pair<std::int64_t, std::future<detail::ChunkResult>>> inflight;
        std::int64_t next_launch = first;
        auto launch = [&] {
            while (next_launch < n_chunks &&
                   inflight.size() < static_cast<std::size_t>(cfg_.threads)) {
                std::int64_t k = next_launch++;
                if (cfg_.threads == 1)
                    inflight.emplace_back(k, std::async(std::launch::deferred,
                                                        [this, k] { return compute_chunk(k); }));
                else
                    inflight.emplace_back(k, std::async(std::launch::async,
                                                        [this, k] { return compute_chunk(k); }));
            }
        };
        for (std::int64_t k = first; k < n_chunks; ++k) {
            launch();
            detail::ChunkResult res = inflight.front().second.get();
            inflight.pop_front();

            if (file && cfg_.abort_during_chunk == k) {
                // simulate a kill in the middle of writing this chunk
                file->write(res.payload.data(),
                            static_cast<std::streamsize>(res.payload.size() / 2));
                file->flush();
                std::_Exit(137);
            }

            if (file) {
                file->write(res.payload.data(), static_cast<std::streamsize>(res.payload.size()));
                file->flush();
            } else {
                std::fwrite(res.payload.data(), 1, res.payload.size(), stdout);
            }
            for (const ScanRecord& rec : res.records) summary.absorb_row(rec);
            rows += res.records.size();
            if (file) {
                std::int64_t upto = std::min(cfg_.to, cfg_.from + (k + 1) * cfg_.chunk_size - 1);
                write_checkpoint(*file, summary, rows, upto);
            }
        }
    }

    void write_checkpoint(std::fstream& file, const SummaryState& summary, std::uint64_t rows,
                          std::int64_t completed_upto) const {
        nlohmann::json j;
        j["version"] = 1;
        j["spec_digest"] = cfg_.digest();
        j["records_path"] = cfg_.out_path;
        j["completed_upto"] = completed_upto;
        j["byte_offset"] = static_cast<std::uint64_t>(file.tellp());
        j["rows"] = rows;
        j["summary"] = summary.to_json();
        std::string tmp = cfg_.checkpoint_path() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
            out << j.dump(0) << "\n";
        }
        std::filesystem::rename(tmp, cfg_.checkpoint_path());
    }

    nlohmann::json load_checkpoint() const {
        std::ifstream in(cfg_.checkpoint_path(), std::ios::binary);
        if (!in) throw usage_error("checkpoint not found: " + cfg_.checkpoint_path());
        nlohmann::json j = nlohmann::json::parse(in);
        if (j.at("spec_digest").get<std::string>() != cfg_.digest())
            throw usage_error("refusing to resume: scan configuration digest mismatch");
        if (j.at("records_path").get<std::string>() != cfg_.out_path)
            throw usage_error("refusing to resume: checkpoint records a different output path");
        return j;
    }

    ScanConfig cfg_;
};

// The ten (n, P(n^2+1)) pairs around Luca's example, computed from scratch.
inline std::vector<std::pair<std::int64_t, Int>> luca_table(const arith::FactorConfig& cfg = {}) {
    std::vector<std::pair<std::int64_t, Int>> out;
    for (std::int64_t n = 24208141; n <= 24208150; ++n) {
        Int v = Int(n) * n + 1;
        out.emplace_back(n, arith::greatest_prime_factor(v, cfg));
    }
    return out;
}

inline const std::vector<std::pair<std::int64_t, Int>>& luca_golden() {
    static const std::vector<std::pair<std::int64_t, Int>> table = {
        {24208141, Int("119529857")},
        {24208142, Int("121140377")},
        {24208143, Int("67749617053")},
        {24208144, Int("89")},
        {24208145, Int("5218192121")},
        {24208146, Int("586034332757317")},
        {24208147, Int("58603438117361")},
        {24208148, Int("117206885917981")},
        {24208149, Int("2292977009")},
        {24208150, Int("127793609")},
    };
    return table;
}

}  // namespace gpftk::scan
