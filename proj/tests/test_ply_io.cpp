#include "pmfht/ply_io.hpp"

#include "pmfht/errors.hpp"
#include "pmfht/synth.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <string>

using namespace pmfht;

namespace {

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name,
                                 const std::string& body) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << body;
    return path;
}

std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

PointCloud decorated_cloud() {
    PointCloud cloud = synth::blob(40);
    cloud.colors.resize(40);
    for (int i = 0; i < 40; ++i)
        cloud.colors[static_cast<std::size_t>(i)] = {static_cast<std::uint8_t>(i * 3),
                                                     static_cast<std::uint8_t>(255 - i),
                                                     static_cast<std::uint8_t>(i)};
    cloud.scalars["quality"] = test::random_vector(40, 9);
    cloud.scalars["curvature"] = test::random_vector(40, 10);
    return cloud;
}

} // namespace

TEST_CASE("ascii round trip preserves coordinates, colors, and scalars") {
    const auto dir = test::fresh_dir("ply_ascii");
    const PointCloud cloud = decorated_cloud();
    write_ply(cloud, dir / "c.ply", PlyFormat::ascii);
    const PointCloud back = read_ply(dir / "c.ply");

    REQUIRE(back.size() == cloud.size());
    CHECK((back.points - cloud.points).cwiseAbs().maxCoeff() < 1e-7);
    REQUIRE(back.has_colors());
    CHECK(back.colors == cloud.colors);
    REQUIRE(back.scalars.count("quality") == 1);
    REQUIRE(back.scalars.count("curvature") == 1);
    CHECK((back.scalars.at("quality") - cloud.scalars.at("quality")).cwiseAbs().maxCoeff() <
          1e-7);
}

TEST_CASE("binary round trip is bit exact") {
    const auto dir = test::fresh_dir("ply_binary");
    const PointCloud cloud = decorated_cloud();
    write_ply(cloud, dir / "c.ply", PlyFormat::binary_little_endian);
    const PointCloud back = read_ply(dir / "c.ply");

    REQUIRE(back.size() == cloud.size());
    CHECK(back.points == cloud.points); // exact
    CHECK(back.colors == cloud.colors);
    CHECK(back.scalars.at("curvature") == cloud.scalars.at("curvature"));

    // Writing the same cloud twice gives identical bytes.
    write_ply(back, dir / "c2.ply", PlyFormat::binary_little_endian);
    CHECK(read_bytes(dir / "c.ply") == read_bytes(dir / "c2.ply"));
}

TEST_CASE("reader accepts float32 coordinates and sized type aliases") {
    const auto dir = test::fresh_dir("ply_float32");
    const auto path = write_file(dir, "f.ply",
                                 "ply\n"
                                 "format ascii 1.0\n"
                                 "comment scanned\n"
                                 "element vertex 2\n"
                                 "property float32 x\n"
                                 "property float32 y\n"
                                 "property float32 z\n"
                                 "property uint8 red\n"
                                 "property uint8 green\n"
                                 "property uint8 blue\n"
                                 "property float64 confidence\n"
                                 "end_header\n"
                                 "0 0 1.5e0 10 20 30 0.25\n"
                                 "1 -2 3 40 50 60 0.75\n");
    const PointCloud cloud = read_ply(path);
    REQUIRE(cloud.size() == 2);
    CHECK(cloud.points(0, 2) == doctest::Approx(1.5));
    CHECK(cloud.points(1, 1) == doctest::Approx(-2.0));
    REQUIRE(cloud.has_colors());
    CHECK(cloud.colors[1] == std::array<std::uint8_t, 3>{40, 50, 60});
    REQUIRE(cloud.scalars.count("confidence") == 1);
    CHECK(cloud.scalars.at("confidence")[1] == doctest::Approx(0.75));
}

TEST_CASE("integer vertex properties that are not colors are skipped") {
    const auto dir = test::fresh_dir("ply_intprop");
    const auto path = write_file(dir, "i.ply",
                                 "ply\nformat ascii 1.0\n"
                                 "element vertex 1\n"
                                 "property float x\nproperty float y\nproperty float z\n"
                                 "property int label\n"
                                 "end_header\n"
                                 "1 2 3 7\n");
    const PointCloud cloud = read_ply(path);
    CHECK(cloud.size() == 1);
    CHECK(cloud.scalars.empty());
    CHECK(!cloud.has_colors());
}

TEST_CASE("non-vertex elements are skipped in ascii") {
    const auto dir = test::fresh_dir("ply_skip");
    const auto path = write_file(dir, "s.ply",
                                 "ply\nformat ascii 1.0\n"
                                 "element camera 2\n"
                                 "property float cx\n"
                                 "element vertex 2\n"
                                 "property float x\nproperty float y\nproperty float z\n"
                                 "element face 1\n"
                                 "property list uchar int vertex_indices\n"
                                 "end_header\n"
                                 "0.5\n"
                                 "0.6\n"
                                 "1 2 3\n"
                                 "4 5 6\n"
                                 "3 0 1 0\n");
    const PointCloud cloud = read_ply(path);
    REQUIRE(cloud.size() == 2);
    CHECK(cloud.points(1, 0) == doctest::Approx(4.0));
}

TEST_CASE("binary element with fixed stride before vertex is skipped") {
    const auto dir = test::fresh_dir("ply_binskip");
    std::string body = "ply\nformat binary_little_endian 1.0\n"
                       "element camera 1\n"
                       "property float cx\nproperty float cy\n"
                       "element vertex 1\n"
                       "property double x\nproperty double y\nproperty double z\n"
                       "end_header\n";
    const float cam[2] = {1.0f, 2.0f};
    const double xyz[3] = {4.0, 5.0, 6.0};
    body.append(reinterpret_cast<const char*>(cam), sizeof(cam));
    body.append(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    const auto path = write_file(dir, "b.ply", body);
    const PointCloud cloud = read_ply(path);
    REQUIRE(cloud.size() == 1);
    CHECK(cloud.points(0, 0) == 4.0);
    CHECK(cloud.points(0, 2) == 6.0);
}

TEST_CASE("reader error positions and contracts") {
    const auto dir = test::fresh_dir("ply_errors");

    SUBCASE("missing magic") {
        const auto p = write_file(dir, "a.ply", "plyx\nformat ascii 1.0\nend_header\n");
        CHECK_THROWS_WITH_AS(read_ply(p), doctest::Contains("line 1"), InputError);
    }
    SUBCASE("unsupported format") {
        const auto p = write_file(dir, "b.ply",
                                  "ply\nformat binary_big_endian 1.0\n"
                                  "element vertex 1\nproperty float x\nproperty float y\n"
                                  "property float z\nend_header\n");
        CHECK_THROWS_WITH_AS(read_ply(p), doctest::Contains("binary_big_endian"), InputError);
    }
    SUBCASE("unsupported version") {
        const auto p = write_file(dir, "v.ply", "ply\nformat ascii 2.0\nend_header\n");
        CHECK_THROWS_AS(read_ply(p), InputError);
    }
    SUBCASE("list-typed vertex property") {
        const auto p = write_file(dir, "c.ply",
                                  "ply\nformat ascii 1.0\nelement vertex 1\n"
                                  "property float x\nproperty float y\nproperty float z\n"
                                  "property list uchar float weights\n"
                                  "end_header\n1 2 3\n");
        CHECK_THROWS_WITH_AS(read_ply(p), doctest::Contains("list"), InputError);
    }
    SUBCASE("missing coordinates") {
        const auto p = write_file(dir, "d.ply",
                                  "ply\nformat ascii 1.0\nelement vertex 1\n"
                                  "property float x\nproperty float y\nend_header\n1 2\n");
        CHECK_THROWS_WITH_AS(read_ply(p), doctest::Contains("x, y, z"), InputError);
    }
    SUBCASE("integer coordinates are rejected") {
        const auto p = write_file(dir, "e.ply",
                                  "ply\nformat ascii 1.0\nelement vertex 1\n"
                                  "property int x\nproperty float y\nproperty float z\n"
                                  "end_header\n1 2 3\n");
        CHECK_THROWS_WITH_AS(read_ply(p), doctest::Contains("'x'"), InputError);
    }
    SUBCASE("row count mismatch reports the line") {
        const auto p = write_file(dir, "f.ply",
                                  "ply\nformat ascii 1.0\nelement vertex 3\n"
                                  "property float x\nproperty float y\nproperty float z\n"
                                  "end_header\n1 2 3\n4 5 6\n");
        CHECK_THROWS_WITH_AS(read_ply(p), doctest::Contains("line 10"), InputError);
    }
    SUBCASE("unparsable ascii value reports the line") {
        const auto p = write_file(dir, "g.ply",
                                  "ply\nformat ascii 1.0\nelement vertex 1\n"
                                  "property float x\nproperty float y\nproperty float z\n"
                                  "end_header\n1 oops 3\n");
        CHECK_THROWS_WITH_AS(read_ply(p), doctest::Contains("line 8"), InputError);
    }
    SUBCASE("non-finite coordinate is rejected") {
        std::string body = "ply\nformat binary_little_endian 1.0\n"
                           "element vertex 1\n"
                           "property double x\nproperty double y\nproperty double z\n"
                           "end_header\n";
        const double xyz[3] = {1.0, std::numeric_limits<double>::quiet_NaN(), 3.0};
        body.append(reinterpret_cast<const char*>(xyz), sizeof(xyz));
        const auto p = write_file(dir, "h.ply", body);
        CHECK_THROWS_WITH_AS(read_ply(p), doctest::Contains("non-finite"), InputError);
    }
    SUBCASE("property before any element") {
        const auto p = write_file(dir, "l.ply",
                                  "ply\nformat ascii 1.0\nproperty float x\nend_header\n");
        CHECK_THROWS_WITH_AS(read_ply(p), doctest::Contains("line 3"), InputError);
    }
    SUBCASE("unknown header keyword") {
        const auto p = write_file(dir, "m.ply",
                                  "ply\nformat ascii 1.0\nelemnt vertex 1\nend_header\n");
        CHECK_THROWS_WITH_AS(read_ply(p), doctest::Contains("elemnt"), InputError);
    }
    SUBCASE("truncated binary reports the byte offset") {
        std::string body = "ply\nformat binary_little_endian 1.0\n"
                           "element vertex 2\n"
                           "property double x\nproperty double y\nproperty double z\n"
                           "end_header\n";
        const double xyz[3] = {1, 2, 3};
        const std::size_t header_size = body.size();
        body.append(reinterpret_cast<const char*>(xyz), sizeof(xyz));
        body.append(reinterpret_cast<const char*>(xyz), 8); // half a row
        const auto p = write_file(dir, "i.ply", body);
        const std::string where =
            "byte offset " + std::to_string(header_size + sizeof(xyz));
        CHECK_THROWS_WITH_AS(read_ply(p), doctest::Contains(where.c_str()), InputError);
    }
    SUBCASE("binary list element before vertex cannot be skipped") {
        const auto p = write_file(dir, "j.ply",
                                  "ply\nformat binary_little_endian 1.0\n"
                                  "element face 1\n"
                                  "property list uchar int vertex_indices\n"
                                  "element vertex 1\n"
                                  "property double x\nproperty double y\nproperty double z\n"
                                  "end_header\n");
        CHECK_THROWS_WITH_AS(read_ply(p), doctest::Contains("face"), InputError);
    }
    SUBCASE("no vertex element") {
        const auto p = write_file(dir, "k.ply",
                                  "ply\nformat ascii 1.0\nelement face 0\nend_header\n");
        CHECK_THROWS_WITH_AS(read_ply(p), doctest::Contains("vertex"), InputError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_ply(dir / "nope.ply"), InputError);
    }
}

TEST_CASE("vertex count matches the header declaration") {
    const auto dir = test::fresh_dir("ply_count");
    const PointCloud cloud = synth::blob(437);
    write_ply(cloud, dir / "blob.ply", PlyFormat::ascii);

    // Independent header inspection.
    std::ifstream in(dir / "blob.ply");
    std::string line;
    long declared = -1;
    while (std::getline(in, line))
        if (line.rfind("element vertex ", 0) == 0) {
            declared = std::stol(line.substr(15));
            break;
        }
    CHECK(declared == 437);
    CHECK(read_ply(dir / "blob.ply").size() == 437);
}

TEST_CASE("farthest point downsampling") {
    SUBCASE("deterministic and sorted") {
        const PointCloud cloud = synth::blob(200);
        const PointCloud a = downsample(cloud, 50, 0);
        const PointCloud b = downsample(cloud, 50, 123); // seed does not alter selection
        REQUIRE(a.size() == 50);
        CHECK(a.points == b.points);
        // Every output point exists in the input, in ascending index order.
        Eigen::Index last = -1;
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            Eigen::Index found = -1;
            for (Eigen::Index j = last + 1; j < cloud.size(); ++j)
                if (cloud.points.row(j) == a.points.row(i)) {
                    found = j;
                    break;
                }
            REQUIRE(found >= 0);
            last = found;
        }
    }
    SUBCASE("spreads points better than random subsets") {
        const PointCloud cloud = synth::blob(200);
        const PointCloud picked = downsample(cloud, 8, 0);
        const auto min_pairwise = [](const PointCloud& c) {
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < c.size(); ++i)
                for (Eigen::Index j = i + 1; j < c.size(); ++j)
                    best = std::min(best, (c.point(i) - c.point(j)).norm());
            return best;
        };
        const double fps_spread = min_pairwise(picked);
        std::mt19937_64 rng(99);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int> idx(200);
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), rng);
            idx.resize(8);
            std::sort(idx.begin(), idx.end());
            CHECK(fps_spread >= min_pairwise(cloud.select(idx)));
        }
    }
    SUBCASE("keeps attributes") {
        PointCloud cloud = synth::blob(60);
        cloud.scalars["w"] = test::random_vector(60, 4);
        cloud.colors.assign(60, {1, 2, 3});
        const PointCloud small = downsample(cloud, 10, 0);
        CHECK(small.scalars.at("w").size() == 10);
        CHECK(small.colors.size() == 10);
    }
    SUBCASE("target at least the size returns the cloud unchanged") {
        const PointCloud cloud = synth::blob(20);
        CHECK(downsample(cloud, 20, 0).points == cloud.points);
        CHECK(downsample(cloud, 500, 0).points == cloud.points);
    }
    SUBCASE("tiny targets are rejected") {
        CHECK_THROWS_AS(downsample(synth::blob(20), 3, 0), ConfigError);
    }
    SUBCASE("starts from the point nearest the centroid") {
        // 3x3 unit grid: the middle point sits exactly on the centroid, the
        // four corners tie for farthest and the lowest index must win.
        const PointCloud cloud = synth::grid(3, 3, 1.0);
        const auto order = farthest_point_order(cloud, 3);
        CHECK(order[0] == 4);
        CHECK(order[1] == 0);
        CHECK(order[2] == 2);
    }
}
