#include "rfer/model_io.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "rfer/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "model container assumes a little-endian host");

namespace rfer {

namespace {

constexpr char kMagic[4] = {'R', 'F', 'E', 'R'};
constexpr std::uint32_t kFormatVersion = 1;

struct Writer {
    std::vector<std::uint8_t> buf;

    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf.insert(buf.end(), b, b + n);
    }
    void u8(std::uint8_t v) { bytes(&v, 1); }
    void u32(std::uint32_t v) { bytes(&v, 4); }
    void u64(std::uint64_t v) { bytes(&v, 8); }
    void f64(double v) { bytes(&v, 8); }
    void f64s(const double* p, std::size_t n) { bytes(p, n * 8); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s.data(), s.size());
    }
};

struct Reader {
    const std::uint8_t* p;
    std::size_t left;
    std::string origin;

    void bytes(void* out, std::size_t n) {
        if (n > left) raise(Errc::bad_model_file, origin + ": truncated");
        std::memcpy(out, p, n);
        p += n;
        left -= n;
    }
    std::uint8_t u8() {
        std::uint8_t v;
        bytes(&v, 1);
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        bytes(&v, 4);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        bytes(&v, 8);
        return v;
    }
    double f64() {
        double v;
        bytes(&v, 8);
        return v;
    }
    void f64s(double* out, std::size_t n) { bytes(out, n * 8); }
    std::string str() {
        std::uint32_t n = u32();
        if (n > left) raise(Errc::bad_model_file, origin + ": truncated string");
        std::string s(reinterpret_cast<const char*>(p), n);
        p += n;
        left -= n;
        return s;
    }
};

} // namespace

std::vector<std::uint8_t> serialize_model(const SavedModel& model) {
    Writer w;
    w.bytes(kMagic, 4);
    w.u32(kFormatVersion);

    std::uint64_t hash =
        model.source == MaskSource::scheme ? region_scheme_hash(model.scheme) : 0;
    w.u64(hash);
    w.str(model.source == MaskSource::scheme ? region_scheme_to_json(model.scheme) : "");
    w.u8(static_cast<std::uint8_t>(model.source));
    w.u32(static_cast<std::uint32_t>(model.grid_rows));
    w.u32(static_cast<std::uint32_t>(model.grid_cols));
    w.u8(static_cast<std::uint8_t>(model.kinds));

    w.u32(static_cast<std::uint32_t>(model.mask_indices.size()));
    for (int idx : model.mask_indices) w.u32(static_cast<std::uint32_t>(idx));

    w.u8(0); // scaling method: min-max
    w.u64(model.scaling.dim());
    w.f64s(model.scaling.min.data(), model.scaling.min.size());
    w.f64s(model.scaling.max.data(), model.scaling.max.size());

    w.u32(static_cast<std::uint32_t>(model.svm.classes.size()));
    for (const auto& c : model.svm.classes) w.str(c);
    for (const auto& bm : model.svm.binaries) {
        w.f64(bm.C);
        w.f64(bm.gamma);
        w.f64(bm.bias);
        w.u8(bm.converged ? 1 : 0);
        w.u64(bm.support_vectors.rows);
        w.u64(bm.support_vectors.cols);
        w.f64s(bm.alpha_y.data(), bm.alpha_y.size());
        w.f64s(bm.support_vectors.data.data(), bm.support_vectors.data.size());
    }
    return std::move(w.buf);
}

SavedModel deserialize_model(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
    Reader r{bytes.data(), bytes.size(), origin};
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        raise(Errc::bad_model_file, origin + ": bad magic bytes");
    std::uint32_t version = r.u32();
    if (version != kFormatVersion)
        raise(Errc::bad_model_file,
              origin + ": unsupported format version " + std::to_string(version));

    SavedModel m;
    std::uint64_t stored_hash = r.u64();
    std::string scheme_json = r.str();
    m.source = static_cast<MaskSource>(r.u8());
    m.grid_rows = static_cast<int>(r.u32());
    m.grid_cols = static_cast<int>(r.u32());
    m.kinds = static_cast<FeatureKind>(r.u8());

    if (m.source == MaskSource::scheme) {
        m.scheme = parse_region_scheme(scheme_json, origin + " (embedded scheme)");
        if (region_scheme_hash(m.scheme) != stored_hash)
            raise(Errc::bad_model_file, origin + ": embedded scheme does not match its hash");
    }

    std::uint32_t nidx = r.u32();
    m.mask_indices.resize(nidx);
    for (auto& idx : m.mask_indices) idx = static_cast<int>(r.u32());

    std::uint8_t method = r.u8();
    if (method != 0)
        raise(Errc::bad_model_file, origin + ": unknown scaling method " + std::to_string(method));
    std::uint64_t dim = r.u64();
    m.scaling.min.resize(dim);
    m.scaling.max.resize(dim);
    r.f64s(m.scaling.min.data(), dim);
    r.f64s(m.scaling.max.data(), dim);

    std::uint32_t nclasses = r.u32();
    m.svm.classes.resize(nclasses);
    for (auto& c : m.svm.classes) c = r.str();
    m.svm.binaries.resize(nclasses);
    for (auto& bm : m.svm.binaries) {
        bm.C = r.f64();
        bm.gamma = r.f64();
        bm.bias = r.f64();
        bm.converged = r.u8() != 0;
        std::uint64_t nsv = r.u64();
        std::uint64_t svdim = r.u64();
        bm.support_vectors = Matrix(nsv, svdim);
        bm.alpha_y.resize(nsv);
        r.f64s(bm.alpha_y.data(), nsv);
        r.f64s(bm.support_vectors.data.data(), nsv * svdim);
    }
    if (r.left != 0) raise(Errc::bad_model_file, origin + ": trailing bytes");
    return m;
}

void save_model(const std::string& path, const SavedModel& model) {
    auto bytes = serialize_model(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_error, path + ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) raise(Errc::io_error, path + ": write failed");
}

SavedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(path)) raise(Errc::file_not_found, path);
        raise(Errc::io_error, path + ": cannot open");
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return deserialize_model(bytes, path);
}

std::vector<RegionMask> model_masks(const SavedModel& model, const LandmarkSet& landmarks,
                                    int image_width, int image_height) {
    if (model.source == MaskSource::scheme)
        return build_regions(landmarks, model.scheme, image_width, image_height);
    Box box = landmark_bounding_box(landmarks, image_width, image_height);
    return partition_grid(box, model.grid_rows, model.grid_cols);
}

std::pair<int, std::vector<double>> predict_sample(const SavedModel& model, const Image& image,
                                                   const LandmarkSet& landmarks) {
    auto masks = model_masks(model, landmarks, image.width, image.height);
    FeatureVector fv = extract_from_masks(image, masks, model.mask_indices, model.kinds);
    apply_scaling(model.scaling, fv.values.data(), fv.values.size());
    auto vals = decision_values(model.svm, fv.values.data(), fv.values.size());
    std::size_t best = 0;
    for (std::size_t k = 1; k < vals.size(); ++k)
        if (vals[k] > vals[best]) best = k;
    return {static_cast<int>(best), vals};
}

} // namespace rfer
