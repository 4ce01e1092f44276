#include "pmfht/ply_io.hpp"
#include "pmfht/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "binary PLY io assumes a little-endian host");

namespace pmfht {

namespace {

enum class PropType { i8, u8, i16, u16, i32, u32, f32, f64, list };

struct Property {
    std::string name;
    PropType type = PropType::f32;
};

struct Element {
    std::string name;
    long count = 0;
    std::vector<Property> props;
    bool has_list = false;
};

std::size_t prop_size(PropType t) {
    switch (t) {
    case PropType::i8:
    case PropType::u8: return 1;
    case PropType::i16:
    case PropType::u16: return 2;
    case PropType::i32:
    case PropType::u32:
    case PropType::f32: return 4;
    case PropType::f64: return 8;
    case PropType::list: return 0;
    }
    return 0;
}

std::optional<PropType> parse_type(const std::string& s) {
    if (s == "char" || s == "int8") return PropType::i8;
    if (s == "uchar" || s == "uint8") return PropType::u8;
    if (s == "short" || s == "int16") return PropType::i16;
    if (s == "ushort" || s == "uint16") return PropType::u16;
    if (s == "int" || s == "int32") return PropType::i32;
    if (s == "uint" || s == "uint32") return PropType::u32;
    if (s == "float" || s == "float32") return PropType::f32;
    if (s == "double" || s == "float64") return PropType::f64;
    if (s == "list") return PropType::list;
    return std::nullopt;
}

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& msg) {
    throw InputError(path.string() + ": " + msg);
}

double decode_binary_value(const char* p, PropType t) {
    switch (t) {
    case PropType::i8: { std::int8_t v; std::memcpy(&v, p, 1); return v; }
    case PropType::u8: { std::uint8_t v; std::memcpy(&v, p, 1); return v; }
    case PropType::i16: { std::int16_t v; std::memcpy(&v, p, 2); return v; }
    case PropType::u16: { std::uint16_t v; std::memcpy(&v, p, 2); return v; }
    case PropType::i32: { std::int32_t v; std::memcpy(&v, p, 4); return v; }
    case PropType::u32: { std::uint32_t v; std::memcpy(&v, p, 4); return v; }
    case PropType::f32: { float v; std::memcpy(&v, p, 4); return v; }
    case PropType::f64: { double v; std::memcpy(&v, p, 8); return v; }
    case PropType::list: break;
    }
    return 0.0;
}

struct Header {
    bool binary = false;
    std::vector<Element> elements;
    std::size_t header_lines = 0;
};

Header read_header(std::istream& in, const std::filesystem::path& path) {
    Header hdr;
    std::string line;
    std::size_t lineno = 0;

    const auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line))
            fail(path, "unexpected end of file in header at line " + std::to_string(lineno + 1));
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        return line;
    };

    if (next_line() != "ply")
        fail(path, "line 1: missing 'ply' magic");

    bool have_format = false;
    bool ended = false;
    while (!ended) {
        std::istringstream ls(next_line());
        std::string kw;
        ls >> kw;
        if (kw.empty() || kw == "comment" || kw == "obj_info")
            continue;
        if (kw == "format") {
            std::string fmt, ver;
            ls >> fmt >> ver;
            if (ver != "1.0")
                fail(path, "line " + std::to_string(lineno) + ": unsupported PLY version '" + ver + "'");
            if (fmt == "ascii")
                hdr.binary = false;
            else if (fmt == "binary_little_endian")
                hdr.binary = true;
            else
                fail(path, "line " + std::to_string(lineno) + ": unsupported format '" + fmt + "'");
            have_format = true;
        } else if (kw == "element") {
            Element el;
            ls >> el.name >> el.count;
            if (el.name.empty() || el.count < 0)
                fail(path, "line " + std::to_string(lineno) + ": malformed element declaration");
            hdr.elements.push_back(std::move(el));
        } else if (kw == "property") {
            if (hdr.elements.empty())
                fail(path, "line " + std::to_string(lineno) + ": property before any element");
            std::string ts;
            ls >> ts;
            const auto t = parse_type(ts);
            if (!t)
                fail(path, "line " + std::to_string(lineno) + ": unknown property type '" + ts + "'");
            Property prop;
            prop.type = *t;
            if (*t == PropType::list) {
                std::string count_t, value_t, name;
                ls >> count_t >> value_t >> name;
                prop.name = name;
                hdr.elements.back().has_list = true;
            } else {
                ls >> prop.name;
            }
            if (prop.name.empty())
                fail(path, "line " + std::to_string(lineno) + ": property without a name");
            hdr.elements.back().props.push_back(std::move(prop));
        } else if (kw == "end_header") {
            ended = true;
        } else {
            fail(path, "line " + std::to_string(lineno) + ": unknown header keyword '" + kw + "'");
        }
    }
    if (!have_format)
        fail(path, "header has no format declaration");
    hdr.header_lines = lineno;
    return hdr;
}

} // namespace

PointCloud read_ply(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(path, "cannot open file");

    const Header hdr = read_header(in, path);

    const auto vertex_it = std::find_if(hdr.elements.begin(), hdr.elements.end(),
                                        [](const Element& e) { return e.name == "vertex"; });
    if (vertex_it == hdr.elements.end())
        fail(path, "no vertex element declared");
    const Element& vertex = *vertex_it;
    if (vertex.count < 1)
        fail(path, "vertex element declares no vertices");
    if (vertex.has_list)
        fail(path, "list-typed vertex properties are not supported");

    int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1;
    std::vector<int> scalar_props;
    for (std::size_t k = 0; k < vertex.props.size(); ++k) {
        const Property& p = vertex.props[k];
        const bool is_real = p.type == PropType::f32 || p.type == PropType::f64;
        if (p.name == "x" || p.name == "y" || p.name == "z") {
            if (!is_real)
                fail(path, "vertex property '" + p.name + "' must be float or double");
            (p.name == "x" ? ix : p.name == "y" ? iy : iz) = static_cast<int>(k);
        } else if ((p.name == "red" || p.name == "green" || p.name == "blue") &&
                   p.type == PropType::u8) {
            (p.name == "red" ? ir : p.name == "green" ? ig : ib) = static_cast<int>(k);
        } else if (is_real) {
            scalar_props.push_back(static_cast<int>(k));
        } // other integer-typed properties are skipped
    }
    if (ix < 0 || iy < 0 || iz < 0)
        fail(path, "vertex element lacks x, y, z properties");
    const bool with_colors = ir >= 0 && ig >= 0 && ib >= 0;

    PointCloud cloud;
    cloud.points.resize(vertex.count, 3);
    if (with_colors)
        cloud.colors.resize(static_cast<std::size_t>(vertex.count));
    for (int k : scalar_props)
        cloud.scalars.emplace(vertex.props[static_cast<std::size_t>(k)].name,
                              Eigen::VectorXd(vertex.count));

    const auto check_finite = [&](long row, const std::string& where) {
        if (!cloud.points.row(row).allFinite())
            fail(path, "non-finite coordinate in vertex " + std::to_string(row) + " (" + where + ")");
    };

    if (!hdr.binary) {
        std::size_t lineno = hdr.header_lines;
        std::string line;
        const auto data_line = [&](const std::string& what) -> std::string& {
            if (!std::getline(in, line))
                fail(path, "unexpected end of file at line " + std::to_string(lineno + 1) +
                               ": expected " + what);
            ++lineno;
            return line;
        };
        for (const Element& el : hdr.elements) {
            if (el.name != "vertex") {
                for (long i = 0; i < el.count; ++i)
                    data_line("row of element '" + el.name + "'");
                if (&el < &vertex)
                    continue;
                break; // elements after vertex are irrelevant
            }
            std::vector<double> row(el.props.size());
            for (long v = 0; v < el.count; ++v) {
                std::istringstream ls(data_line("vertex " + std::to_string(v)));
                for (std::size_t k = 0; k < el.props.size(); ++k) {
                    if (!(ls >> row[k]))
                        fail(path, "line " + std::to_string(lineno) + ": cannot parse value " +
                                       std::to_string(k + 1) + " of vertex " + std::to_string(v));
                }
                cloud.points(v, 0) = row[static_cast<std::size_t>(ix)];
                cloud.points(v, 1) = row[static_cast<std::size_t>(iy)];
                cloud.points(v, 2) = row[static_cast<std::size_t>(iz)];
                check_finite(v, "line " + std::to_string(lineno));
                if (with_colors) {
                    cloud.colors[static_cast<std::size_t>(v)] = {
                        static_cast<std::uint8_t>(row[static_cast<std::size_t>(ir)]),
                        static_cast<std::uint8_t>(row[static_cast<std::size_t>(ig)]),
                        static_cast<std::uint8_t>(row[static_cast<std::size_t>(ib)])};
                }
                for (int k : scalar_props)
                    cloud.scalars[vertex.props[static_cast<std::size_t>(k)].name][v] =
                        row[static_cast<std::size_t>(k)];
            }
            break;
        }
    } else {
        for (const Element& el : hdr.elements) {
            if (el.name != "vertex") {
                if (el.has_list)
                    fail(path, "cannot skip element '" + el.name +
                                   "' with list properties before vertex data");
                std::size_t stride = 0;
                for (const Property& p : el.props)
                    stride += prop_size(p.type);
                in.seekg(static_cast<std::streamoff>(stride * static_cast<std::size_t>(el.count)),
                         std::ios::cur);
                continue;
            }
            std::size_t stride = 0;
            std::vector<std::size_t> offsets(el.props.size());
            for (std::size_t k = 0; k < el.props.size(); ++k) {
                offsets[k] = stride;
                stride += prop_size(el.props[k].type);
            }
            std::vector<char> buf(stride);
            for (long v = 0; v < el.count; ++v) {
                const std::streamoff at = in.tellg();
                if (!in.read(buf.data(), static_cast<std::streamsize>(stride)))
                    fail(path, "unexpected end of file at byte offset " + std::to_string(at) +
                                   ": vertex " + std::to_string(v) + " of " +
                                   std::to_string(el.count));
                const auto get = [&](int k) {
                    return decode_binary_value(buf.data() + offsets[static_cast<std::size_t>(k)],
                                               el.props[static_cast<std::size_t>(k)].type);
                };
                cloud.points(v, 0) = get(ix);
                cloud.points(v, 1) = get(iy);
                cloud.points(v, 2) = get(iz);
                check_finite(v, "byte offset " + std::to_string(at));
                if (with_colors)
                    cloud.colors[static_cast<std::size_t>(v)] = {
                        static_cast<std::uint8_t>(get(ir)), static_cast<std::uint8_t>(get(ig)),
                        static_cast<std::uint8_t>(get(ib))};
                for (int k : scalar_props)
                    cloud.scalars[vertex.props[static_cast<std::size_t>(k)].name][v] = get(k);
            }
            break;
        }
    }

    cloud.validate();
    return cloud;
}

void write_ply(const PointCloud& cloud, const std::filesystem::path& path, PlyFormat format) {
    cloud.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError(path.string() + ": cannot open for writing");

    const bool binary = format == PlyFormat::binary_little_endian;
    out << "ply\n";
    out << "format " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n";
    out << "element vertex " << cloud.size() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    if (cloud.has_colors())
        out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    for (const auto& [name, values] : cloud.scalars)
        out << "property double " << name << "\n";
    out << "end_header\n";

    char buf[64];
    for (Eigen::Index i = 0; i < cloud.size(); ++i) {
        if (binary) {
            double xyz[3] = {cloud.points(i, 0), cloud.points(i, 1), cloud.points(i, 2)};
            out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
            if (cloud.has_colors())
                out.write(reinterpret_cast<const char*>(cloud.colors[static_cast<std::size_t>(i)].data()), 3);
            for (const auto& [name, values] : cloud.scalars) {
                const double v = values[i];
                out.write(reinterpret_cast<const char*>(&v), sizeof(v));
            }
        } else {
            std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g", cloud.points(i, 0),
                          cloud.points(i, 1), cloud.points(i, 2));
            out << buf;
            if (cloud.has_colors()) {
                const auto& c = cloud.colors[static_cast<std::size_t>(i)];
                out << ' ' << static_cast<int>(c[0]) << ' ' << static_cast<int>(c[1]) << ' '
                    << static_cast<int>(c[2]);
            }
            for (const auto& [name, values] : cloud.scalars) {
                std::snprintf(buf, sizeof(buf), " %.9g", values[i]);
                out << buf;
            }
            out << '\n';
        }
    }
    if (!out)
        throw InputError(path.string() + ": write failed");
}

std::vector<int> farthest_point_order(const PointCloud& cloud, int count) {
    const int n = static_cast<int>(cloud.size());
    count = std::min(count, n);

    // Start from the point nearest the centroid (lowest index on ties).
    const Eigen::RowVector3d centroid = cloud.points.colwise().mean();
    int start = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double d2 = (cloud.points.row(i) - centroid).squaredNorm();
        if (d2 < best) {
            best = d2;
            start = i;
        }
    }

    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(count));
    order.push_back(start);
    Eigen::VectorXd min_d2 =
        (cloud.points.rowwise() - cloud.points.row(start)).rowwise().squaredNorm();
    for (int k = 1; k < count; ++k) {
        int far = 0;
        double far_d2 = -1.0;
        for (int i = 0; i < n; ++i) {
            if (min_d2[i] > far_d2) {
                far_d2 = min_d2[i];
                far = i;
            }
        }
        order.push_back(far);
        min_d2 = min_d2.cwiseMin(
            (cloud.points.rowwise() - cloud.points.row(far)).rowwise().squaredNorm());
    }
    return order;
}

PointCloud downsample(const PointCloud& cloud, int target, std::uint64_t seed) {
    (void)seed; // selection is fully deterministic; kept for interface stability
    cloud.validate();
    if (target < 4)
        throw ConfigError("downsample target must be at least 4");
    if (target >= cloud.size())
        return cloud;

    std::vector<int> kept = farthest_point_order(cloud, target);
    std::sort(kept.begin(), kept.end());
    return cloud.select(kept);
}

} // namespace pmfht
