#ifndef CCBAM_TENSOR_HPP
#define CCBAM_TENSOR_HPP

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccbam {

// Rank-4 activation geometry: (batch, channels, height = frequency, width = time).
struct Shape4 {
    long b = 0, c = 0, h = 0, w = 0;

    long count() const { return b * c * h * w; }

    bool operator==(const Shape4& o) const {
        return b == o.b && c == o.c && h == o.h && w == o.w;
    }
    bool operator!=(const Shape4& o) const { return !(*this == o); }

    // Row-major linear index.
    long index(long ib, long ic, long ih, long iw) const {
        return ((ib * c + ic) * h + ih) * w + iw;
    }

    std::string str() const {
        std::ostringstream os;
        os << "(" << b << "," << c << "," << h << "," << w << ")";
        return os.str();
    }
};

[[noreturn]] inline void shape_error(const std::string& op, const std::string& detail) {
    throw std::invalid_argument(op + ": " + detail);
}

template <typename T>
struct Tensor {
    Shape4 shape;
    std::vector<T> data;

    Tensor() = default;
    explicit Tensor(Shape4 s) : shape(s), data(static_cast<size_t>(s.count()), T(0)) {}
    Tensor(Shape4 s, T fill) : shape(s), data(static_cast<size_t>(s.count()), fill) {}

    static Tensor zeros(Shape4 s) { return Tensor(s); }
    static Tensor full(Shape4 s, T v) { return Tensor(s, v); }

    long count() const { return shape.count(); }

    T& at(long b, long c, long h, long w) { return data[shape.index(b, c, h, w)]; }
    const T& at(long b, long c, long h, long w) const { return data[shape.index(b, c, h, w)]; }

    T& operator[](long i) { return data[static_cast<size_t>(i)]; }
    const T& operator[](long i) const { return data[static_cast<size_t>(i)]; }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

// Pair of same-shaped real planes carrying one complex-valued feature map.
template <typename T>
struct CTensor {
    Tensor<T> re, im;

    CTensor() = default;
    CTensor(Tensor<T> r, Tensor<T> i) : re(std::move(r)), im(std::move(i)) {
        if (re.shape != im.shape)
            shape_error("CTensor", "real plane " + re.shape.str() +
                                       " vs imag plane " + im.shape.str());
    }

    static CTensor zeros(Shape4 s) { return CTensor(Tensor<T>(s), Tensor<T>(s)); }

    const Shape4& shape() const { return re.shape; }
};

template <typename T>
inline bool all_finite(const Tensor<T>& t) {
    for (T v : t.data)
        if (!std::isfinite(v)) return false;
    return true;
}

template <typename T>
inline bool all_finite(const CTensor<T>& t) {
    return all_finite(t.re) && all_finite(t.im);
}

}  // namespace ccbam

#endif
