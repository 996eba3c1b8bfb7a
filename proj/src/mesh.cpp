#include "bmbem/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace bmbem {

namespace {

std::uint64_t edge_key(int a, int b) {
    const auto lo = static_cast<std::uint32_t>(std::min(a, b));
    const auto hi = static_cast<std::uint32_t>(std::max(a, b));
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

Element make_element(const Vec3& a, const Vec3& b, const Vec3& c) {
    Element e;
    e.corners = {a, b, c};
    e.centroid = (a + b + c) / 3.0;
    const Vec3 cr = (b - a).cross(c - a);
    const double twice_area = cr.norm();
    e.area = 0.5 * twice_area;
    e.normal = twice_area > 0.0 ? Vec3(cr / twice_area) : Vec3::Zero();
    e.diameter = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    return e;
}

}  // namespace

Mesh::Mesh(std::vector<Vec3> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
    const int nv = static_cast<int>(vertices_.size());
    if (faces_.empty()) throw MeshTopologyError(-1, -1, "mesh has no triangles");

    // Directed edge counts: each undirected edge must appear exactly once in
    // each direction for a closed, consistently oriented surface.
    std::map<std::uint64_t, std::array<int, 2>> edges;
    for (const Face& f : faces_) {
        for (int idx : f) {
            if (idx < 0 || idx >= nv) {
                throw MeshTopologyError(idx, idx, "vertex index out of range");
            }
        }
        for (int e = 0; e < 3; ++e) {
            const int a = f[e];
            const int b = f[(e + 1) % 3];
            if (a == b) throw MeshTopologyError(a, b, "degenerate edge");
            auto& count = edges[edge_key(a, b)];
            ++count[a < b ? 0 : 1];
        }
    }
    for (const auto& [key, count] : edges) {
        const int a = static_cast<int>(key >> 32);
        const int b = static_cast<int>(key & 0xffffffffu);
        const int total = count[0] + count[1];
        if (total != 2) {
            throw MeshTopologyError(a, b, "shared by " + std::to_string(total) +
                                              " triangles (expected 2)");
        }
        if (count[0] != 1) throw MeshTopologyError(a, b, "inconsistent winding");
    }
    edge_count_ = edges.size();

    elements_.reserve(faces_.size());
    for (const Face& f : faces_) {
        elements_.push_back(make_element(vertices_[f[0]], vertices_[f[1]], vertices_[f[2]]));
        if (!(elements_.back().area > 0.0)) {
            throw MeshTopologyError(f[0], f[1], "triangle with zero area");
        }
    }

    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
            diameter_ = std::max(diameter_, (vertices_[i] - vertices_[j]).squaredNorm());
        }
    }
    diameter_ = std::sqrt(diameter_);
}

std::uint64_t Mesh::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    for (const Vec3& v : vertices_) mix(v.data(), 3 * sizeof(double));
    for (const Face& f : faces_) mix(f.data(), 3 * sizeof(int));
    return h;
}

Mesh icosphere(int level, double radius) {
    if (level < 0) throw DomainError("icosphere: level must be >= 0");
    if (!(radius > 0.0)) throw DomainError("icosphere: radius must be > 0");

    std::vector<Vec3> v;
    v.emplace_back(0.0, 0.0, 1.0);
    const double zr = 1.0 / std::sqrt(5.0);
    const double rr = 2.0 / std::sqrt(5.0);
    for (int i = 0; i < 5; ++i) {
        const double a = 2.0 * pi * i / 5.0;
        v.emplace_back(rr * std::cos(a), rr * std::sin(a), zr);
    }
    for (int i = 0; i < 5; ++i) {
        const double a = 2.0 * pi * i / 5.0 + pi / 5.0;
        v.emplace_back(rr * std::cos(a), rr * std::sin(a), -zr);
    }
    v.emplace_back(0.0, 0.0, -1.0);
    for (Vec3& p : v) p *= radius;

    std::vector<Mesh::Face> f;
    auto up = [](int i) { return 1 + (i % 5); };
    auto lo = [](int i) { return 6 + (i % 5); };
    for (int i = 0; i < 5; ++i) {
        f.push_back({0, up(i), up(i + 1)});
        f.push_back({up(i), lo(i), up(i + 1)});
        f.push_back({up(i + 1), lo(i), lo(i + 1)});
        f.push_back({11, lo(i + 1), lo(i)});
    }

    for (int l = 0; l < level; ++l) {
        std::map<std::uint64_t, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = edge_key(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const Vec3 m = 0.5 * (v[a] + v[b]);
            v.push_back(radius * m.normalized());
            const int idx = static_cast<int>(v.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<Mesh::Face> next;
        next.reserve(4 * f.size());
        for (const auto& t : f) {
            const int ab = mid(t[0], t[1]);
            const int bc = mid(t[1], t[2]);
            const int ca = mid(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({ab, t[1], bc});
            next.push_back({ca, bc, t[2]});
            next.push_back({ab, bc, ca});
        }
        f = std::move(next);
    }
    return Mesh(std::move(v), std::move(f));
}

std::string format_mesh(const Mesh& mesh) {
    std::string out;
    out += std::to_string(mesh.vertices().size()) + " " + std::to_string(mesh.size()) + "\n";
    char buf[64];
    for (const Vec3& p : mesh.vertices()) {
        for (int c = 0; c < 3; ++c) {
            auto res = std::to_chars(buf, buf + sizeof(buf), p[c]);
            out.append(buf, res.ptr);
            out += c < 2 ? ' ' : '\n';
        }
    }
    for (const auto& t : mesh.faces()) {
        out += std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
    }
    return out;
}

namespace {

class LineReader {
public:
    explicit LineReader(const std::string& text) : in_(text) {}

    // Next non-blank line split into tokens; throws at end of input.
    std::vector<std::string> next(const char* expecting) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            std::istringstream ls(line);
            std::vector<std::string> tokens;
            for (std::string t; ls >> t;) tokens.push_back(t);
            if (!tokens.empty()) return tokens;
        }
        throw MeshParseError(line_no_ + 1, std::string("unexpected end of file, expecting ") + expecting);
    }
    std::size_t line() const { return line_no_; }

    template <typename T>
    T number(const std::string& token) const {
        T value{};
        const auto* end = token.data() + token.size();
        auto res = std::from_chars(token.data(), end, value);
        if (res.ec != std::errc{} || res.ptr != end) {
            throw MeshParseError(line_no_, "invalid number '" + token + "'");
        }
        return value;
    }

private:
    std::istringstream in_;
    std::size_t line_no_ = 0;
};

}  // namespace

Mesh parse_mesh(const std::string& text) {
    LineReader reader(text);
    auto header = reader.next("header 'V F'");
    if (header.size() != 2) throw MeshParseError(reader.line(), "header must be 'V F'");
    const auto nv = reader.number<long>(header[0]);
    const auto nf = reader.number<long>(header[1]);
    if (nv < 3 || nf < 1) throw MeshParseError(reader.line(), "header counts out of range");

    std::vector<Vec3> vertices;
    vertices.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        auto t = reader.next("vertex 'x y z'");
        if (t.size() != 3) throw MeshParseError(reader.line(), "vertex line needs 3 coordinates");
        vertices.emplace_back(reader.number<double>(t[0]), reader.number<double>(t[1]),
                              reader.number<double>(t[2]));
    }
    std::vector<Mesh::Face> faces;
    faces.reserve(nf);
    for (long i = 0; i < nf; ++i) {
        auto t = reader.next("triangle 'i j k'");
        if (t.size() != 3) throw MeshParseError(reader.line(), "triangle line needs 3 indices");
        Mesh::Face face{};
        for (int c = 0; c < 3; ++c) {
            face[c] = reader.number<int>(t[c]);
            if (face[c] < 0 || face[c] >= nv) {
                throw MeshParseError(reader.line(), "vertex index " + t[c] + " out of range");
            }
        }
        faces.push_back(face);
    }
    return Mesh(std::move(vertices), std::move(faces));
}

Mesh load_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mesh file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_mesh(ss.str());
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write mesh file " + path.string());
    out << format_mesh(mesh);
}

MeshStats mesh_stats(const Mesh& mesh, std::optional<double> freq_hz) {
    MeshStats s{};
    s.elements = mesh.size();
    s.vertices = mesh.vertices().size();
    s.diameter = mesh.diameter();
    s.edge_min = std::numeric_limits<double>::infinity();
    double edge_sum = 0.0;
    std::size_t edge_n = 0;
    std::map<std::uint64_t, bool> seen;
    for (const auto& f : mesh.faces()) {
        for (int e = 0; e < 3; ++e) {
            const int a = f[e];
            const int b = f[(e + 1) % 3];
            if (!seen.emplace(edge_key(a, b), true).second) continue;
            const double len = (mesh.vertices()[a] - mesh.vertices()[b]).norm();
            edge_sum += len;
            ++edge_n;
            s.edge_min = std::min(s.edge_min, len);
            s.edge_max = std::max(s.edge_max, len);
        }
    }
    s.edge_mean = edge_sum / static_cast<double>(edge_n);
    for (const Element& e : mesh.elements()) {
        s.area_sum += e.area;
        s.centroid_norm_mean += e.centroid.norm();
    }
    s.centroid_norm_mean /= static_cast<double>(mesh.size());
    if (freq_hz) {
        if (!(*freq_hz > 0.0)) throw DomainError("mesh_stats: frequency must be > 0");
        s.elements_per_wavelength = speed_of_sound / *freq_hz / s.edge_mean;
    }
    return s;
}

}  // namespace bmbem
