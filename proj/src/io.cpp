#include "ttcross/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ttcross {

std::string format_double(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

void write_flat(std::ostream& out, const double* data, index_t count) {
    for (index_t i = 0; i < count; ++i) {
        out << format_double(data[i]);
        out << (((i + 1) % 8 == 0 || i + 1 == count) ? '\n' : ' ');
    }
}

void read_flat(std::istream& in, double* data, index_t count, const std::string& what) {
    for (index_t i = 0; i < count; ++i)
        if (!(in >> data[i])) throw std::runtime_error(what + ": truncated data");
}

}  // namespace

void write_dt(const DenseTensor& t, const std::string& path) {
    auto out = open_out(path);
    out << "dims:";
    for (index_t d : t.dims()) out << ' ' << d;
    out << '\n';
    write_flat(out, t.data(), t.size());
    if (!out) throw std::runtime_error("write failed: " + path);
}

DenseTensor read_dt(const std::string& path) {
    auto in = open_in(path);
    std::string header;
    if (!std::getline(in, header) || header.rfind("dims:", 0) != 0)
        throw std::runtime_error("read_dt: missing 'dims:' header in " + path);
    std::istringstream hs(header.substr(5));
    std::vector<index_t> dims;
    for (index_t d; hs >> d;) dims.push_back(d);
    if (dims.empty()) throw std::runtime_error("read_dt: empty dimension list in " + path);
    DenseTensor t(dims);
    read_flat(in, t.data(), t.size(), "read_dt");
    return t;
}

void write_tt(const TTTensor& g, const std::string& path) {
    auto out = open_out(path);
    out << g.order() << '\n';
    for (index_t j = 0; j < g.order(); ++j) {
        const TTCore& c = g.core(j);
        out << c.r_left() << ' ' << c.d() << ' ' << c.r_right() << '\n';
        write_flat(out, c.data(), c.size());
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

TTTensor read_tt(const std::string& path) {
    auto in = open_in(path);
    index_t n = 0;
    if (!(in >> n) || n < 1) throw std::runtime_error("read_tt: bad core count in " + path);
    std::vector<TTCore> cores;
    cores.reserve(static_cast<std::size_t>(n));
    for (index_t j = 0; j < n; ++j) {
        index_t rl = 0, d = 0, rr = 0;
        if (!(in >> rl >> d >> rr)) throw std::runtime_error("read_tt: bad core header in " + path);
        TTCore c(rl, d, rr);
        read_flat(in, c.data(), c.size(), "read_tt");
        cores.push_back(std::move(c));
    }
    return TTTensor(std::move(cores));
}

void write_sets(const NestedIndexSets& sets, const std::string& path) {
    auto out = open_out(path);
    out << "N " << sets.order() << '\n';
    out << "nested " << (sets.nested ? 1 : 0) << '\n';
    for (std::size_t k = 0; k < sets.left.size(); ++k) {
        out << "bond " << (k + 1) << ' ' << sets.left[k].size() << '\n';
        auto dump = [&](const std::vector<MultiIndex>& group) {
            for (const auto& m : group) {
                for (std::size_t i = 0; i < m.idx.size(); ++i)
                    out << m.idx[i] << (i + 1 == m.idx.size() ? '\n' : ' ');
            }
        };
        dump(sets.left[k]);
        dump(sets.right[k]);
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

NestedIndexSets read_sets(const std::string& path) {
    auto in = open_in(path);
    std::string word;
    index_t n = 0;
    int nested = 1;
    if (!(in >> word >> n) || word != "N" || n < 2)
        throw std::runtime_error("read_sets: bad order header in " + path);
    if (!(in >> word >> nested) || word != "nested")
        throw std::runtime_error("read_sets: bad nested flag in " + path);
    NestedIndexSets sets;
    sets.nested = nested != 0;
    sets.left.resize(static_cast<std::size_t>(n - 1));
    sets.right.resize(static_cast<std::size_t>(n - 1));
    for (index_t k = 1; k <= n - 1; ++k) {
        index_t bond = 0, count = 0;
        if (!(in >> word >> bond >> count) || word != "bond" || bond != k || count < 1)
            throw std::runtime_error("read_sets: bad bond header in " + path);
        auto load = [&](index_t len) {
            std::vector<MultiIndex> group;
            group.reserve(static_cast<std::size_t>(count));
            for (index_t i = 0; i < count; ++i) {
                MultiIndex m;
                m.idx.resize(static_cast<std::size_t>(len));
                for (auto& v : m.idx)
                    if (!(in >> v)) throw std::runtime_error("read_sets: truncated member in " + path);
                group.push_back(std::move(m));
            }
            return group;
        };
        sets.left[static_cast<std::size_t>(k - 1)] = load(k);
        sets.right[static_cast<std::size_t>(k - 1)] = load(n - k);
    }
    return sets;
}

}  // namespace ttcross
