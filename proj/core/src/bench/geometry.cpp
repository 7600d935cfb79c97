#include "mvr/bench/geometry.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "mvr/error.hpp"

namespace mvr::bench {

std::int64_t intersection_area(const Rect& a, const Rect& b) noexcept {
    const std::int64_t w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
    const std::int64_t h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
    return (w > 0 && h > 0) ? w * h : 0;
}

std::vector<Rect> grid_cells(ImageSize image, int n) {
    if (n <= 0) {
        fail(ErrorCode::InvalidArgument, fmt::format("grid size must be positive, got {}", n));
    }
    if (image.width < n || image.height < n) {
        fail(ErrorCode::ImageTooSmall,
             fmt::format("{}x{} image cannot be split into a {}x{} grid", image.width, image.height, n, n));
    }
    const std::int64_t cw = image.width / n;
    const std::int64_t ch = image.height / n;
    std::vector<Rect> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    for (int row = 0; row < n; ++row) {
        const std::int64_t y = row * ch;
        const std::int64_t h = row == n - 1 ? image.height - y : ch;
        for (int col = 0; col < n; ++col) {
            const std::int64_t x = col * cw;
            const std::int64_t w = col == n - 1 ? image.width - x : cw;
            cells.push_back({x, y, w, h});
        }
    }
    return cells;
}

CellChoice select_cell(ImageSize image, const Rect& bbox, int n) {
    const auto cells = grid_cells(image, n);
    CellChoice best{0, intersection_area(cells[0], bbox)};
    for (std::size_t i = 1; i < cells.size(); ++i) {
        const std::int64_t overlap = intersection_area(cells[i], bbox);
        if (overlap > best.overlap_area) {
            best = {i, overlap};
        }
    }
    return best;
}

Rect extend_to_include(const Rect& cell, const Rect& bbox, ImageSize image) noexcept {
    const std::int64_t left = std::max<std::int64_t>(0, std::min(cell.x, bbox.x));
    const std::int64_t top = std::max<std::int64_t>(0, std::min(cell.y, bbox.y));
    const std::int64_t right = std::min(image.width, std::max(cell.right(), bbox.right()));
    const std::int64_t bottom = std::min(image.height, std::max(cell.bottom(), bbox.bottom()));
    return {left, top, right - left, bottom - top};
}

}  // namespace mvr::bench
