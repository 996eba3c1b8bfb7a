#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "bmbem/common.hpp"

namespace bmbem {

/// Flat triangular panel with its collocation data.
struct Element {
    std::array<Vec3, 3> corners;
    Vec3 centroid;  // collocation node
    Vec3 normal;    // unit, outward
    double area;
    double diameter;  // longest edge
};

/// File contents that are not a valid mesh description.
class MeshParseError : public std::runtime_error {
public:
    MeshParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Connectivity that is not a closed, consistently oriented surface.
class MeshTopologyError : public std::runtime_error {
public:
    MeshTopologyError(int a, int b, const std::string& what)
        : std::runtime_error("edge (" + std::to_string(a) + ", " + std::to_string(b) + "): " + what),
          edge_{a, b} {}
    std::array<int, 2> edge() const { return edge_; }

private:
    std::array<int, 2> edge_;
};

/// Watertight, consistently wound triangle surface. Immutable after
/// construction; the derived per-element data is computed once.
class Mesh {
public:
    using Face = std::array<int, 3>;

    /// Validates indices, positive areas, and that every edge is shared by
    /// exactly two triangles traversing it in opposite directions.
    Mesh(std::vector<Vec3> vertices, std::vector<Face> faces);

    std::size_t size() const { return faces_.size(); }
    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<Face>& faces() const { return faces_; }
    const Element& element(std::size_t i) const { return elements_[i]; }
    const std::vector<Element>& elements() const { return elements_; }

    /// Largest distance between two vertices.
    double diameter() const { return diameter_; }
    std::size_t edge_count() const { return edge_count_; }
    long euler_characteristic() const {
        return static_cast<long>(vertices_.size()) - static_cast<long>(edge_count_) +
               static_cast<long>(faces_.size());
    }

    /// FNV-1a hash over the coordinate and index bytes.
    std::uint64_t hash() const;

private:
    std::vector<Vec3> vertices_;
    std::vector<Face> faces_;
    std::vector<Element> elements_;
    double diameter_ = 0.0;
    std::size_t edge_count_ = 0;
};

/// Subdivided icosahedron projected onto a sphere: 20 * 4^level triangles.
/// Level 0 has one vertex on +z; every midpoint split projects the new
/// vertices radially and keeps the parent's winding.
Mesh icosphere(int level, double radius);

Mesh load_mesh(const std::filesystem::path& path);
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);
Mesh parse_mesh(const std::string& text);
std::string format_mesh(const Mesh& mesh);

struct MeshStats {
    std::size_t elements;
    std::size_t vertices;
    double edge_mean, edge_min, edge_max;
    double centroid_norm_mean;
    double area_sum;
    double diameter;
    /// Wavelength divided by the mean edge length, when a frequency is given.
    std::optional<double> elements_per_wavelength;
};

MeshStats mesh_stats(const Mesh& mesh, std::optional<double> freq_hz = std::nullopt);

}  // namespace bmbem
