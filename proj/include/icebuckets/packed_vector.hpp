#ifndef ICEBUCKETS_PACKED_VECTOR_HPP_
#define ICEBUCKETS_PACKED_VECTOR_HPP_

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ice {

// Fixed-width integer vector packed into 64-bit chunks.
class PackedVector {
public:
    PackedVector() = default;

    PackedVector(std::size_t size, std::uint32_t width)
        : size_(size), width_(width) {
        if (width == 0 || width > 64) {
            throw std::invalid_argument("PackedVector: width must be in [1, 64]");
        }
        mask_ = (width == 64) ? ~0ULL : ((1ULL << width) - 1);
        chunks_.assign((size * width + 63) / 64, 0);
    }

    std::uint64_t get(std::size_t i) const {
        const std::size_t bit = i * width_;
        const std::size_t chunk = bit / 64;
        const std::size_t offset = bit % 64;
        std::uint64_t v = chunks_[chunk] >> offset;
        if (offset + width_ > 64) {
            v |= chunks_[chunk + 1] << (64 - offset);
        }
        return v & mask_;
    }

    void set(std::size_t i, std::uint64_t value) {
        const std::size_t bit = i * width_;
        const std::size_t chunk = bit / 64;
        const std::size_t offset = bit % 64;
        chunks_[chunk] = (chunks_[chunk] & ~(mask_ << offset)) | ((value & mask_) << offset);
        if (offset + width_ > 64) {
            const std::size_t spill = offset + width_ - 64;
            const std::uint64_t high_mask = (1ULL << spill) - 1;
            chunks_[chunk + 1] = (chunks_[chunk + 1] & ~high_mask) | ((value & mask_) >> (64 - offset));
        }
    }

    std::size_t size() const { return size_; }
    std::uint32_t width() const { return width_; }
    std::size_t size_in_bits() const { return size_ * width_; }

private:
    std::vector<std::uint64_t> chunks_;
    std::size_t size_ = 0;
    std::uint32_t width_ = 0;
    std::uint64_t mask_ = 0;
};

}  // namespace ice

#endif  // ICEBUCKETS_PACKED_VECTOR_HPP_
