#pragma once

#include <cstdint>
#include <vector>

namespace mvr::bench {

// Axis-aligned pixel rectangle, top-left origin, half-open extents.
struct Rect {
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::int64_t w = 0;
    std::int64_t h = 0;

    std::int64_t right() const noexcept { return x + w; }
    std::int64_t bottom() const noexcept { return y + h; }
    std::int64_t area() const noexcept { return w * h; }

    bool contains(const Rect& other) const noexcept {
        return other.x >= x && other.y >= y && other.right() <= right() && other.bottom() <= bottom();
    }

    bool operator==(const Rect&) const = default;
};

struct ImageSize {
    std::int64_t width = 0;
    std::int64_t height = 0;

    Rect bounds() const noexcept { return {0, 0, width, height}; }
    bool operator==(const ImageSize&) const = default;
};

std::int64_t intersection_area(const Rect& a, const Rect& b) noexcept;

/// n x n row-major tiling of the image. Cell sizes are floor(W / n) and
/// floor(H / n); the leftover pixels go to the last column and last row.
/// Throws ImageTooSmall when either side is shorter than n, InvalidArgument
/// for n == 0.
std::vector<Rect> grid_cells(ImageSize image, int n);

struct CellChoice {
    std::size_t index = 0;
    std::int64_t overlap_area = 0;
};

/// Grid cell with the largest intersection area with `bbox`; the smallest
/// row-major index wins ties.
CellChoice select_cell(ImageSize image, const Rect& bbox, int n);

/// Smallest rectangle containing both `cell` and `bbox`, clamped to the image.
Rect extend_to_include(const Rect& cell, const Rect& bbox, ImageSize image) noexcept;

}  // namespace mvr::bench
