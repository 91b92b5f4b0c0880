#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "srip/dictionaries.hpp"

namespace srip {

/// On-disk layout, all integers and doubles little-endian:
///
///   "SRIPDCT1"              8 bytes
///   u32 version             = 1
///   u32 p
///   u8  kind                0 heisenberg, 1 oscillator, 2 extended_oscillator
///   u32 basis_count
///   f64 mu
///   per basis:
///     u32 label_len, label bytes (UTF-8)
///     p atoms x p entries of (f64 re, f64 im)
inline constexpr char kDictionaryMagic[8] = {'S', 'R', 'I', 'P', 'D', 'C', 'T', '1'};
inline constexpr std::uint32_t kDictionaryFormatVersion = 1;

std::vector<std::uint8_t> encode_dictionary(const Dictionary& dict);
/// Throws FormatError / VersionMismatch / IntegrityFailure. Orthonormality of
/// every basis is re-checked within 1e-8.
Dictionary decode_dictionary(const std::vector<std::uint8_t>& bytes);

/// Writes to a temporary sibling and renames over `path`.
void save_dictionary(const std::filesystem::path& path, const Dictionary& dict);
Dictionary load_dictionary(const std::filesystem::path& path);

/// Atomic text/binary write used by every report writer.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace srip
