#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "polyseg/image.hpp"
#include "polyseg/image_io.hpp"

using namespace polyseg;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "polyseg_image_tests";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("load_image PGM/PPM") {
    SECTION("binary PGM with all pixels 255 loads as 1.0") {
        const fs::path p = temp_dir() / "white.pgm";
        std::string data = "P5\n2 2\n255\n";
        data += std::string(4, static_cast<char>(255));
        write_bytes(p, data);
        ImageField img = load_image(p.string());
        CHECK(img.channels == 1);
        for (double v : img.values) CHECK(v == 1.0);
    }
    SECTION("2x1 gray values scale linearly") {
        const fs::path p = temp_dir() / "pair.pgm";
        std::string data = "P5\n2 1\n255\n";
        data += '\0';
        data += static_cast<char>(128);
        write_bytes(p, data);
        ImageField img = load_image(p.string());
        CHECK(img.at(0, 0) == 0.0);
        CHECK(img.at(1, 0) == Catch::Approx(128.0 / 255.0));
    }
    SECTION("ascii PGM with comments") {
        const fs::path p = temp_dir() / "ascii.pgm";
        write_bytes(p, "P2\n# comment\n2 1\n255\n0 255\n");
        ImageField img = load_image(p.string());
        CHECK(img.at(0, 0) == 0.0);
        CHECK(img.at(1, 0) == 1.0);
    }
    SECTION("binary PPM loads three channels") {
        const fs::path p = temp_dir() / "rgb.ppm";
        std::string data = "P6\n1 1\n255\n";
        data += static_cast<char>(255);
        data += '\0';
        data += static_cast<char>(128);
        write_bytes(p, data);
        ImageField img = load_image(p.string());
        REQUIRE(img.channels == 3);
        CHECK(img.at(0, 0, 0) == 1.0);
        CHECK(img.at(0, 0, 1) == 0.0);
        CHECK(img.at(0, 0, 2) == Catch::Approx(128.0 / 255.0));
    }
    SECTION("unreadable path errors with the path in the message") {
        try {
            load_image("/nonexistent/foo.pgm");
            FAIL("expected throw");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("/nonexistent/foo.pgm") != std::string::npos);
        }
    }
    SECTION("garbage bytes are rejected") {
        const fs::path p = temp_dir() / "junk.bin";
        write_bytes(p, "XYZW123");
        CHECK_THROWS_AS(load_image(p.string()), std::runtime_error);
    }
}

TEST_CASE("PNG round trip") {
    SECTION("all-black grayscale PNG loads as zeros") {
        const fs::path p = temp_dir() / "black.png";
        save_png(p.string(), ImageField(3, 2, 1, 0.0));
        ImageField img = load_image(p.string());
        CHECK(img.channels == 1);
        CHECK(img.width == 3);
        CHECK(img.height == 2);
        for (double v : img.values) CHECK(v == 0.0);
    }
    SECTION("RGB values survive quantized round trip") {
        ImageField src(4, 3, 3);
        std::mt19937 rng(2);
        std::uniform_int_distribution<int> u8(0, 255);
        for (double& v : src.values) v = u8(rng) / 255.0;
        const fs::path p = temp_dir() / "rgb.png";
        save_png(p.string(), src);
        ImageField back = load_image(p.string());
        REQUIRE(back.channels == 3);
        for (std::size_t i = 0; i < src.values.size(); ++i) {
            CHECK(back.values[i] == Catch::Approx(src.values[i]).margin(1.0 / 255.0));
        }
    }
}

TEST_CASE("to_cielab") {
    auto lab_of = [](double r, double g, double b) {
        ImageField img(1, 1, 3);
        img.at(0, 0, 0) = r;
        img.at(0, 0, 1) = g;
        img.at(0, 0, 2) = b;
        ImageField lab = to_cielab(img);
        return std::array<double, 3>{lab.at(0, 0, 0), lab.at(0, 0, 1), lab.at(0, 0, 2)};
    };
    SECTION("white maps to L=100, a=b=0") {
        auto lab = lab_of(1, 1, 1);
        CHECK(lab[0] == Catch::Approx(1.0).margin(1e-9));
        CHECK(lab[1] == Catch::Approx(128.0 / 255.0).margin(1e-9));
        CHECK(lab[2] == Catch::Approx(128.0 / 255.0).margin(1e-9));
    }
    SECTION("black maps to L=0, a=b=0") {
        auto lab = lab_of(0, 0, 0);
        CHECK(lab[0] == Catch::Approx(0.0).margin(1e-12));
        CHECK(lab[1] == Catch::Approx(128.0 / 255.0).margin(1e-9));
        CHECK(lab[2] == Catch::Approx(128.0 / 255.0).margin(1e-9));
    }
    SECTION("mid-gray matches the frozen reference value") {
        // golden from an independent implementation of the CIE formulas
        auto lab = lab_of(0.5, 0.5, 0.5);
        CHECK(lab[0] * 100.0 == Catch::Approx(53.3889647411).margin(1e-6));
        CHECK(lab[1] == Catch::Approx(128.0 / 255.0).margin(1e-9));
        CHECK(lab[2] == Catch::Approx(128.0 / 255.0).margin(1e-9));
    }
    SECTION("primary colors match frozen references") {
        auto red = lab_of(1, 0, 0);
        CHECK(red[0] * 100.0 == Catch::Approx(53.2407918333).margin(1e-6));
        CHECK(red[1] * 255.0 - 128.0 == Catch::Approx(80.0924695448).margin(1e-6));
        CHECK(red[2] * 255.0 - 128.0 == Catch::Approx(67.2031925365).margin(1e-6));
        auto blue = lab_of(0, 0, 1);
        CHECK(blue[0] * 100.0 == Catch::Approx(32.2970093230).margin(1e-6));
        CHECK(blue[2] * 255.0 - 128.0 == Catch::Approx(-107.8601645298).margin(1e-6));
    }
    SECTION("maps [0,1]^3 into [0,1]^3 deterministically") {
        ImageField img(16, 16, 3);
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double& v : img.values) v = u(rng);
        ImageField lab1 = to_cielab(img);
        ImageField lab2 = to_cielab(img);
        for (std::size_t i = 0; i < lab1.values.size(); ++i) {
            CHECK(lab1.values[i] >= 0.0);
            CHECK(lab1.values[i] <= 1.0);
            CHECK(lab1.values[i] == lab2.values[i]);
        }
    }
    SECTION("grayscale passes through unchanged") {
        ImageField img(2, 2, 1, 0.25);
        ImageField out = to_cielab(img);
        CHECK(out.channels == 1);
        CHECK(out.values == img.values);
    }
}

TEST_CASE("region_statistics") {
    SECTION("constant image gives constant means") {
        ImageField img(8, 8, 1, 0.7);
        CurveSet cs({Polygon({{2, 2}, {6, 2}, {6, 6}, {2, 6}})});
        LabelMask m = rasterize_labels(cs, 8, 8);
        auto stats = region_statistics(img, m);
        for (const auto& s : stats) {
            CHECK(s.mean(0) == Catch::Approx(0.7));
            CHECK(s.sum_sq[0] == Catch::Approx(0.49 * s.area));
        }
    }
    SECTION("2x2 image split along the value boundary") {
        ImageField img(2, 2, 1);
        img.at(0, 0) = 0.0;
        img.at(0, 1) = 0.0;
        img.at(1, 0) = 1.0;
        img.at(1, 1) = 1.0;
        LabelMask m;
        m.width = 2;
        m.height = 2;
        m.num_labels = 1;
        m.labels = {0, 1, 0, 1};
        auto stats = region_statistics(img, m);
        REQUIRE(stats.size() == 2);
        CHECK(find_stats(stats, 0)->mean(0) == 0.0);
        CHECK(find_stats(stats, 1)->mean(0) == 1.0);
    }
    SECTION("random mask equals brute-force accumulation, areas cover the image") {
        std::mt19937 rng(31);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        ImageField img(16, 16, 1);
        for (double& v : img.values) v = u(rng);
        LabelMask m;
        m.width = 16;
        m.height = 16;
        m.num_labels = 3;
        for (int i = 0; i < 256; ++i) m.labels.push_back(static_cast<int>(rng() % 4));
        auto stats = region_statistics(img, m);
        double total_area = 0.0;
        for (const auto& s : stats) {
            double sum = 0.0, sum_sq = 0.0, area = 0.0;
            for (int y = 0; y < 16; ++y) {
                for (int x = 0; x < 16; ++x) {
                    if (m.at(x, y) == s.label) {
                        area += 1.0;
                        sum += img.at(x, y);
                        sum_sq += img.at(x, y) * img.at(x, y);
                    }
                }
            }
            CHECK(s.area == area);
            CHECK(s.sum[0] == Catch::Approx(sum).epsilon(1e-12));
            CHECK(s.sum_sq[0] == Catch::Approx(sum_sq).epsilon(1e-12));
            CHECK(s.sum_sq[0] - s.sum[0] * s.sum[0] / s.area >= -1e-12);
            total_area += s.area;
        }
        CHECK(total_area == 256.0);
    }
    SECTION("empty labels are omitted") {
        ImageField img(4, 4, 1, 0.5);
        LabelMask m;
        m.width = 4;
        m.height = 4;
        m.num_labels = 5;
        m.labels.assign(16, 0);
        m.labels[0] = 2;
        auto stats = region_statistics(img, m);
        REQUIRE(stats.size() == 2);
        CHECK(stats[0].label == 0);
        CHECK(stats[1].label == 2);
        CHECK(find_stats(stats, 3) == nullptr);
    }
}

TEST_CASE("generate_synthetic") {
    SECTION("two_disks has exactly two components") {
        auto scene = generate_synthetic(SyntheticKind::two_disks, 128, 128, 0.0, 1);
        CHECK(scene.ground_truth.num_labels == 2);
        for (std::size_t i = 0; i < scene.image.values.size(); ++i) {
            CHECK(scene.image.values[i] == (scene.ground_truth.labels[i] ? 1.0 : 0.0));
        }
    }
    SECTION("annulus has one component with one hole") {
        auto scene = generate_synthetic(SyntheticKind::annulus, 128, 128, 0.0, 1);
        CHECK(scene.ground_truth.num_labels == 1);
        std::vector<uint8_t> bg(scene.ground_truth.labels.size());
        for (std::size_t i = 0; i < bg.size(); ++i) bg[i] = scene.ground_truth.labels[i] == 0;
        CHECK(count_components_4(bg, 128, 128) == 2);
    }
    SECTION("bars are pixel-aligned rectangles") {
        auto scene = generate_synthetic(SyntheticKind::bars, 100, 100, 0.0, 1);
        CHECK(scene.ground_truth.num_labels == 2);
        int area = 0;
        for (int32_t l : scene.ground_truth.labels) area += l != 0;
        CHECK(area == 2 * 15 * 60);
    }
    SECTION("same seed reproduces the image exactly; noise stays in range") {
        auto a = generate_synthetic(SyntheticKind::two_disks, 64, 64, 0.15, 99);
        auto b = generate_synthetic(SyntheticKind::two_disks, 64, 64, 0.15, 99);
        CHECK(a.image.values == b.image.values);
        for (double v : a.image.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        auto c = generate_synthetic(SyntheticKind::two_disks, 64, 64, 0.15, 100);
        CHECK(a.image.values != c.image.values);
    }
}

TEST_CASE("bilinear sampling") {
    ImageField img(2, 2, 1);
    img.at(0, 0) = 0.0;
    img.at(1, 0) = 1.0;
    img.at(0, 1) = 0.0;
    img.at(1, 1) = 1.0;
    CHECK(sample_bilinear(img, 0.5, 0.5, 0) == 0.0);   // at a pixel center
    CHECK(sample_bilinear(img, 1.0, 0.5, 0) == 0.5);   // halfway between centers
    CHECK(sample_bilinear(img, 1.5, 1.5, 0) == 1.0);
    CHECK(sample_bilinear(img, -10.0, 0.5, 0) == 0.0);  // clamps
    CHECK(sample_bilinear(img, 10.0, 10.0, 0) == 1.0);
}
