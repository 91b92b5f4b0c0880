#include "srip/dict_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <unistd.h>

#include "srip/error.hpp"

namespace srip {

namespace {

constexpr double kLoadOrthonormalityTolerance = 1e-8;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const void* data, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), b, b + n);
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) {
      throw Error(Errc::FormatError, "truncated dictionary file at byte " + std::to_string(pos_));
    }
  }
  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string string(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  bool at_end() const noexcept { return pos_ == in_.size(); }
  std::size_t remaining() const noexcept { return in_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_dictionary(const Dictionary& dict) {
  Writer w;
  w.bytes(kDictionaryMagic, sizeof kDictionaryMagic);
  w.u32(kDictionaryFormatVersion);
  w.u32(dict.p());
  w.u8(static_cast<std::uint8_t>(dict.kind()));
  w.u32(static_cast<std::uint32_t>(dict.basis_count()));
  w.f64(dict.mu());
  for (const auto& basis : dict.bases()) {
    w.u32(static_cast<std::uint32_t>(basis.label().size()));
    w.bytes(basis.label().data(), basis.label().size());
    for (const auto& z : basis.atoms().data()) {
      w.f64(z.real());
      w.f64(z.imag());
    }
  }
  return w.take();
}

Dictionary decode_dictionary(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  const std::string magic = r.string(sizeof kDictionaryMagic);
  if (std::memcmp(magic.data(), kDictionaryMagic, sizeof kDictionaryMagic) != 0) {
    throw Error(Errc::FormatError, "bad magic; not a dictionary file");
  }
  const std::uint32_t version = r.u32();
  if (version != kDictionaryFormatVersion) {
    throw Error(Errc::VersionMismatch, "format version " + std::to_string(version) + " is not supported");
  }
  const std::uint32_t p = r.u32();
  try {
    require_field_prime(p);
  } catch (const Error&) {
    throw Error(Errc::FormatError, "header p = " + std::to_string(p) + " is not a valid prime");
  }
  const std::uint8_t kind_byte = r.u8();
  if (kind_byte > 2) throw Error(Errc::FormatError, "unknown kind byte " + std::to_string(kind_byte));
  const std::uint32_t basis_count = r.u32();
  const double mu = r.f64();

  // Each basis needs at least its label length plus p*p complex entries.
  const std::size_t min_basis_bytes = 4 + static_cast<std::size_t>(p) * p * 16;
  if (r.remaining() / min_basis_bytes < basis_count) {
    throw Error(Errc::FormatError, "truncated dictionary file: header declares " + std::to_string(basis_count) +
                                       " bases");
  }
  std::vector<OrthonormalBasis> bases;
  bases.reserve(basis_count);
  for (std::uint32_t b = 0; b < basis_count; ++b) {
    const std::uint32_t label_len = r.u32();
    std::string label = r.string(label_len);
    std::vector<cplx> entries(static_cast<std::size_t>(p) * p);
    for (auto& z : entries) {
      const double re = r.f64();
      const double im = r.f64();
      z = cplx(re, im);
    }
    bases.emplace_back(std::move(label), CMatrix(p, p, std::move(entries)));
  }
  if (!r.at_end()) throw Error(Errc::FormatError, "trailing bytes after last basis");

  for (const auto& basis : bases) {
    if (!basis.atoms().all_finite()) {
      throw Error(Errc::IntegrityFailure, "basis '" + basis.label() + "' has non-finite entries");
    }
    const double defect = basis.orthonormality_defect();
    if (defect > kLoadOrthonormalityTolerance) {
      throw Error(Errc::IntegrityFailure,
                  "basis '" + basis.label() + "' orthonormality defect " + std::to_string(defect));
    }
  }
  return Dictionary(p, static_cast<DictionaryKind>(kind_byte), mu, std::move(bases));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(Errc::IoError, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::IoError, "cannot rename onto " + path.string());
  }
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void save_dictionary(const std::filesystem::path& path, const Dictionary& dict) {
  const auto bytes = encode_dictionary(dict);
  write_file_atomic(path, std::string(bytes.begin(), bytes.end()));
}

Dictionary load_dictionary(const std::filesystem::path& path) { return decode_dictionary(read_file_bytes(path)); }

}  // namespace srip
