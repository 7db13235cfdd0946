// dataset.hpp — phase-trajectory records and their on-disk formats.
//
// A dataset is a header (format version, pixel geometry, spec echo) plus one
// record per shot.  Two serialisations are supported: a length-prefixed
// binary stream that round-trips bit-exactly, and a delimited-text (CSV)
// form with metadata columns first.

#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sg/constants.hpp"
#include "sg/errors.hpp"

namespace sg::data {

enum class DatasetKind : std::uint8_t {
    equilibrium = 0,
    soliton_injected = 1,
    ood_uniform = 2,
    ood_quench_proxy = 3,
};

inline const char* to_string(DatasetKind k) {
    switch (k) {
        case DatasetKind::equilibrium: return "equilibrium";
        case DatasetKind::soliton_injected: return "soliton_injected";
        case DatasetKind::ood_uniform: return "ood_uniform";
        case DatasetKind::ood_quench_proxy: return "ood_quench_proxy";
    }
    return "unknown";
}

inline DatasetKind kind_from_string(const std::string& s) {
    if (s == "equilibrium") return DatasetKind::equilibrium;
    if (s == "soliton_injected") return DatasetKind::soliton_injected;
    if (s == "ood_uniform") return DatasetKind::ood_uniform;
    if (s == "ood_quench_proxy") return DatasetKind::ood_quench_proxy;
    throw config_error("unknown dataset kind: " + s);
}

struct ShotMeta {
    std::uint64_t id = 0;
    double Q = 0.0;        // per-shot coupling after jitter
    double lambda_T = 0.0; // per-shot thermal coherence length, um
    DatasetKind kind = DatasetKind::equilibrium;
    std::uint32_t soliton_count = 0;
    std::uint64_t seed = 0; // sub-stream seed of this shot
};

struct Trajectory {
    std::vector<double> phases; // wrapped to [-pi, pi), fixed length L
    double pixel_size = 2.0;    // um
    ShotMeta meta;
};

struct DatasetHeader {
    std::uint32_t version = 1;
    std::uint32_t L = 35;
    double pixel_size = 2.0; // um
    std::string spec_echo;   // structured-text echo of the generating spec
};

struct Dataset {
    DatasetHeader header;
    std::vector<Trajectory> shots;

    std::size_t size() const { return shots.size(); }
    bool empty() const { return shots.empty(); }
};

// Rebuild the continuous phase record from a wrapped trajectory by choosing
// every step in (-pi, pi].
inline std::vector<double> unwrap(const std::vector<double>& wrapped) {
    std::vector<double> out(wrapped.size());
    if (wrapped.empty()) return out;
    out[0] = wrapped[0];
    for (std::size_t i = 1; i < wrapped.size(); ++i)
        out[i] = out[i - 1] + wrap_increment(wrapped[i] - wrapped[i - 1]);
    return out;
}

// ---------------------------------------------------------------- binary --

namespace detail {

inline void put_bytes(std::string& buf, const void* p, std::size_t n) {
    buf.append(static_cast<const char*>(p), n);
}

template <typename T>
void put(std::string& buf, T v) {
    put_bytes(buf, &v, sizeof(T));
}

inline void put_str(std::string& buf, const std::string& s) {
    put<std::uint64_t>(buf, s.size());
    put_bytes(buf, s.data(), s.size());
}

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > buf.size()) throw data_error("dataset stream truncated");
    }
    template <typename T>
    T get() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, buf.data() + pos, sizeof(T));
        pos += sizeof(T);
        return v;
    }
    std::string get_str() {
        const auto n = get<std::uint64_t>();
        need(n);
        std::string s(buf.data() + pos, n);
        pos += n;
        return s;
    }
};

} // namespace detail

inline std::string serialize_binary(const Dataset& ds) {
    std::string buf;
    buf.reserve(64 + ds.shots.size() * (ds.header.L * 8 + 64));
    detail::put_bytes(buf, "SGDS", 4);
    detail::put<std::uint32_t>(buf, ds.header.version);
    detail::put<std::uint32_t>(buf, ds.header.L);
    detail::put<double>(buf, ds.header.pixel_size);
    detail::put_str(buf, ds.header.spec_echo);
    detail::put<std::uint64_t>(buf, ds.shots.size());
    for (const auto& t : ds.shots) {
        if (t.phases.size() != ds.header.L)
            throw data_error("serialize_binary: trajectory length differs from header L");
        detail::put<std::uint64_t>(buf, t.meta.id);
        detail::put<double>(buf, t.meta.Q);
        detail::put<double>(buf, t.meta.lambda_T);
        detail::put<std::uint8_t>(buf, static_cast<std::uint8_t>(t.meta.kind));
        detail::put<std::uint32_t>(buf, t.meta.soliton_count);
        detail::put<std::uint64_t>(buf, t.meta.seed);
        detail::put_bytes(buf, t.phases.data(), t.phases.size() * sizeof(double));
    }
    return buf;
}

inline Dataset deserialize_binary(const std::string& buf) {
    detail::Reader r{buf};
    r.need(4);
    if (std::memcmp(buf.data(), "SGDS", 4) != 0) throw data_error("not a dataset stream (bad magic)");
    r.pos = 4;
    Dataset ds;
    ds.header.version = r.get<std::uint32_t>();
    if (ds.header.version != 1) throw data_error("unsupported dataset version");
    ds.header.L = r.get<std::uint32_t>();
    ds.header.pixel_size = r.get<double>();
    ds.header.spec_echo = r.get_str();
    const auto count = r.get<std::uint64_t>();
    ds.shots.resize(count);
    for (auto& t : ds.shots) {
        t.meta.id = r.get<std::uint64_t>();
        t.meta.Q = r.get<double>();
        t.meta.lambda_T = r.get<double>();
        t.meta.kind = static_cast<DatasetKind>(r.get<std::uint8_t>());
        t.meta.soliton_count = r.get<std::uint32_t>();
        t.meta.seed = r.get<std::uint64_t>();
        t.pixel_size = ds.header.pixel_size;
        t.phases.resize(ds.header.L);
        r.need(ds.header.L * sizeof(double));
        std::memcpy(t.phases.data(), buf.data() + r.pos, ds.header.L * sizeof(double));
        r.pos += ds.header.L * sizeof(double);
    }
    return ds;
}

// FNV-1a over the binary serialisation; used for manifests and checksums.
inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t content_hash(const Dataset& ds) { return fnv1a(serialize_binary(ds)); }

inline void save_binary(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open for writing: " + path);
    const std::string buf = serialize_binary(ds);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw data_error("write failed: " + path);
}

inline Dataset load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open dataset: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_binary(ss.str());
}

// ------------------------------------------------------------------- csv --

namespace detail {

inline std::string escape_line(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '\n')
            out += "\\n";
        else if (c == '\\')
            out += "\\\\";
        else
            out += c;
    }
    return out;
}

inline std::string unescape_line(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            ++i;
            out += (s[i] == 'n') ? '\n' : s[i];
        } else {
            out += s[i];
        }
    }
    return out;
}

inline std::string fmt_double(double v) {
    char tmp[32];
    std::snprintf(tmp, sizeof(tmp), "%.17g", v);
    return tmp;
}

} // namespace detail

inline void save_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot open for writing: " + path);
    out << "# sgds_csv version=" << ds.header.version << " L=" << ds.header.L
        << " pixel_size=" << detail::fmt_double(ds.header.pixel_size) << "\n";
    out << "# spec_echo=" << detail::escape_line(ds.header.spec_echo) << "\n";
    out << "shot_id,Q,lambda_T,kind,solitons,seed";
    for (std::uint32_t j = 0; j < ds.header.L; ++j) out << ",phi_" << j;
    out << "\n";
    for (const auto& t : ds.shots) {
        out << t.meta.id << ',' << detail::fmt_double(t.meta.Q) << ','
            << detail::fmt_double(t.meta.lambda_T) << ',' << to_string(t.meta.kind) << ','
            << t.meta.soliton_count << ',' << t.meta.seed;
        for (double p : t.phases) out << ',' << detail::fmt_double(p);
        out << "\n";
    }
    if (!out) throw data_error("write failed: " + path);
}

inline Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open dataset: " + path);
    Dataset ds;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# sgds_csv", 0) == 0) {
                std::istringstream ss(line.substr(10));
                std::string tok;
                while (ss >> tok) {
                    const auto eq = tok.find('=');
                    if (eq == std::string::npos) continue;
                    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                    if (key == "version") ds.header.version = std::stoul(val);
                    if (key == "L") ds.header.L = std::stoul(val);
                    if (key == "pixel_size") ds.header.pixel_size = std::stod(val);
                }
            } else if (line.rfind("# spec_echo=", 0) == 0) {
                ds.header.spec_echo = detail::unescape_line(line.substr(12));
            }
            continue;
        }
        if (!header_seen) { // column header row
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        std::string field;
        Trajectory t;
        auto next = [&](const char* what) {
            if (!std::getline(ss, field, ','))
                throw data_error("csv line " + std::to_string(lineno) + ": missing field " + what);
            return field;
        };
        t.meta.id = std::stoull(next("shot_id"));
        t.meta.Q = std::stod(next("Q"));
        t.meta.lambda_T = std::stod(next("lambda_T"));
        t.meta.kind = kind_from_string(next("kind"));
        t.meta.soliton_count = std::stoul(next("solitons"));
        t.meta.seed = std::stoull(next("seed"));
        t.pixel_size = ds.header.pixel_size;
        t.phases.reserve(ds.header.L);
        while (std::getline(ss, field, ',')) t.phases.push_back(std::stod(field));
        if (t.phases.size() != ds.header.L)
            throw data_error("csv line " + std::to_string(lineno) + ": expected " +
                             std::to_string(ds.header.L) + " phases, got " +
                             std::to_string(t.phases.size()));
        ds.shots.push_back(std::move(t));
    }
    return ds;
}

} // namespace sg::data
