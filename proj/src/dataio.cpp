#include "rblda/dataio.hpp"

#include "rblda/errors.hpp"
#include "rblda/rng.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace rblda {

namespace {

[[noreturn]] void parse_fail(const std::string& name, std::size_t line,
                             const std::string& what) {
    throw input_error(name + ":" + std::to_string(line) + ": " + what);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

MtsDataset load_mts_stream(std::istream& in, const std::string& name) {
    std::string line;
    std::size_t lineno = 0;

    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) {
            parse_fail(name, lineno + 1, std::string("unexpected end of file, expected ") + what);
        }
        ++lineno;
    };

    next_line("header \"n d1 d2 c\"");
    long long n = 0, d1 = 0, d2 = 0, c = 0;
    {
        std::istringstream hs(line);
        if (!(hs >> n >> d1 >> d2 >> c) || !(hs >> std::ws).eof()) {
            parse_fail(name, lineno, "malformed header, expected \"n d1 d2 c\"");
        }
    }
    if (n <= 0 || d1 <= 0 || d2 <= 0 || c <= 0) {
        parse_fail(name, lineno, "header values must be positive");
    }

    MtsDataset data;
    data.num_classes = static_cast<int>(c);
    data.observations.reserve(static_cast<std::size_t>(n));
    data.labels.reserve(static_cast<std::size_t>(n));

    for (long long i = 0; i < n; ++i) {
        next_line("observation label");
        long long label = 0;
        {
            std::istringstream ls(line);
            if (!(ls >> label) || !(ls >> std::ws).eof()) {
                parse_fail(name, lineno, "malformed label line");
            }
        }
        if (label < 0 || label >= c) {
            parse_fail(name, lineno, "label " + std::to_string(label) +
                                         " out of range [0, " + std::to_string(c) + ")");
        }
        Matrix obs(d1, d2);
        for (long long r = 0; r < d1; ++r) {
            next_line("observation row");
            // strtod-based parsing so "nan"/"inf" are recognized (and then
            // rejected) rather than tripping a generic stream failure.
            const char* cursor = line.c_str();
            for (long long col = 0; col < d2; ++col) {
                char* end = nullptr;
                const double v = std::strtod(cursor, &end);
                if (end == cursor) {
                    parse_fail(name, lineno, "expected " + std::to_string(d2) +
                                                 " values in observation row");
                }
                if (!std::isfinite(v)) {
                    parse_fail(name, lineno, "non-finite value in observation row");
                }
                obs(r, col) = v;
                cursor = end;
            }
            while (*cursor == ' ' || *cursor == '\t' || *cursor == '\r') ++cursor;
            if (*cursor != '\0') {
                parse_fail(name, lineno, "trailing tokens in observation row");
            }
        }
        data.observations.push_back(std::move(obs));
        data.labels.push_back(static_cast<int>(label));
    }
    if (std::getline(in, line) && !line.empty()) {
        parse_fail(name, lineno + 1, "trailing content after final observation");
    }

    try {
        data.validate();
    } catch (const input_error& e) {
        throw input_error(name + ": " + e.what());
    }
    return data;
}

MtsDataset load_mts(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw input_error("cannot open " + path);
    }
    return load_mts_stream(in, path);
}

void save_mts_stream(std::ostream& out, const MtsDataset& data) {
    data.validate();
    out << data.size() << ' ' << data.d1() << ' ' << data.d2() << ' '
        << data.num_classes << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << data.labels[i] << '\n';
        const Matrix& obs = data.observations[i];
        for (Index r = 0; r < obs.rows(); ++r) {
            for (Index c = 0; c < obs.cols(); ++c) {
                if (c > 0) out << ' ';
                out << format_double(obs(r, c));
            }
            out << '\n';
        }
    }
}

void save_mts(const std::string& path, const MtsDataset& data) {
    std::ofstream out(path);
    if (!out) {
        throw input_error("cannot write " + path);
    }
    save_mts_stream(out, data);
    out.flush();
    if (!out) {
        throw input_error("write failed for " + path);
    }
}

std::pair<MtsDataset, MtsDataset> random_split(const MtsDataset& data,
                                               const SplitSpec& spec) {
    data.validate();
    if (!(spec.proportion > 0.0) || spec.proportion > 1.0) {
        throw input_error("random_split: proportion must lie in (0, 1]");
    }

    SplitMix64 rng(spec.seed);
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    for (int k = 0; k < data.num_classes; ++k) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (data.labels[i] == k) members.push_back(i);
        }
        rng.shuffle(members);
        const auto n_k = members.size();
        std::size_t take = static_cast<std::size_t>(
            std::floor(spec.proportion * static_cast<double>(n_k)));
        if (take < 1) take = 1;
        if (take > n_k) take = n_k;
        for (std::size_t j = 0; j < n_k; ++j) {
            (j < take ? train_idx : test_idx).push_back(members[j]);
        }
    }
    return {subset(data, train_idx), subset(data, test_idx)};
}

MtsDataset synth_separable(Index d1, Index d2, std::size_t n_per_class, int classes,
                           double mean_gap, double noise_sigma, std::uint64_t seed) {
    if (d1 <= 0 || d2 <= 0 || n_per_class == 0 || classes <= 0) {
        throw input_error("synth_separable: dimensions and counts must be positive");
    }
    if (mean_gap < 0.0 || !(noise_sigma > 0.0)) {
        throw input_error("synth_separable: mean_gap must be >= 0 and noise_sigma > 0");
    }

    // Fixed unit-Frobenius rank-one pattern carrying the class means.
    Vector u(d1);
    for (Index i = 0; i < d1; ++i) u(i) = static_cast<double>(i + 1);
    u /= u.norm();
    Vector v(d2);
    for (Index j = 0; j < d2; ++j) v(j) = static_cast<double>(j + 1);
    v /= v.norm();
    Matrix pattern = u * v.transpose();

    SplitMix64 rng(seed);
    MtsDataset data;
    data.num_classes = classes;
    data.observations.reserve(n_per_class * static_cast<std::size_t>(classes));
    data.labels.reserve(n_per_class * static_cast<std::size_t>(classes));
    for (int k = 0; k < classes; ++k) {
        for (std::size_t i = 0; i < n_per_class; ++i) {
            Matrix obs = (mean_gap * static_cast<double>(k)) * pattern;
            for (Index r = 0; r < d1; ++r) {
                for (Index c = 0; c < d2; ++c) {
                    obs(r, c) += noise_sigma * rng.next_gaussian();
                }
            }
            data.observations.push_back(std::move(obs));
            data.labels.push_back(k);
        }
    }
    return data;
}

MtsDataset replicate_rows(const MtsDataset& data, int k) {
    if (k < 1) {
        throw input_error("replicate_rows: factor must be >= 1");
    }
    if (k == 1) return data;
    MtsDataset out;
    out.num_classes = data.num_classes;
    out.labels = data.labels;
    out.observations.reserve(data.size());
    const Index d1 = data.d1();
    for (const Matrix& x : data.observations) {
        Matrix big(d1 * k, data.d2());
        for (int rep = 0; rep < k; ++rep) {
            big.middleRows(rep * d1, d1) = x;
        }
        out.observations.push_back(std::move(big));
    }
    return out;
}

} // namespace rblda
