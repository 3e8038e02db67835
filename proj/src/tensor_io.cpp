#include "emoclass/tensor_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "emoclass/errors.hpp"

namespace emoclass {

namespace {

constexpr uint32_t kMagic = 0x54434d45;  // "EMCT"
constexpr uint32_t kVersion = 1;

template <class T>
void write_pod(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_pod(std::ifstream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) fail(Errc::corrupt_artifact, path + ": truncated tensor file");
  return value;
}

}  // namespace

void save_tensors(const std::string& path, const std::vector<TensorRef>& tensors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_failure, "cannot open for writing: " + path);
  write_pod(out, kMagic);
  write_pod(out, kVersion);
  write_pod(out, static_cast<uint64_t>(tensors.size()));
  for (const TensorRef& ref : tensors) {
    write_pod(out, static_cast<uint32_t>(ref.name.size()));
    out.write(ref.name.data(), static_cast<std::streamsize>(ref.name.size()));
    write_pod(out, static_cast<uint64_t>(ref.tensor->rows()));
    write_pod(out, static_cast<uint64_t>(ref.tensor->cols()));
    out.write(reinterpret_cast<const char*>(ref.tensor->data()),
              static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(ref.tensor->size())));
  }
  if (!out) fail(Errc::io_failure, "write failed: " + path);
}

void load_tensors(const std::string& path, const std::vector<TensorRef>& tensors) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_failure, "cannot open for reading: " + path);
  if (read_pod<uint32_t>(in, path) != kMagic) fail(Errc::corrupt_artifact, path + ": bad magic");
  const uint32_t version = read_pod<uint32_t>(in, path);
  if (version != kVersion) {
    fail(Errc::version_mismatch, path + ": tensor format version " + std::to_string(version) +
                                     ", expected " + std::to_string(kVersion));
  }
  const uint64_t count = read_pod<uint64_t>(in, path);
  if (count != tensors.size()) {
    fail(Errc::corrupt_artifact, path + ": has " + std::to_string(count) + " tensors, expected " +
                                     std::to_string(tensors.size()));
  }
  for (const TensorRef& ref : tensors) {
    const uint32_t name_len = read_pod<uint32_t>(in, path);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (!in) fail(Errc::corrupt_artifact, path + ": truncated tensor name");
    if (name != ref.name) {
      fail(Errc::corrupt_artifact, path + ": tensor '" + name + "' where '" + ref.name + "' expected");
    }
    const uint64_t rows = read_pod<uint64_t>(in, path);
    const uint64_t cols = read_pod<uint64_t>(in, path);
    if (rows != static_cast<uint64_t>(ref.tensor->rows()) || cols != static_cast<uint64_t>(ref.tensor->cols())) {
      fail(Errc::corrupt_artifact, path + ": tensor '" + name + "' has shape " + std::to_string(rows) + "x" +
                                       std::to_string(cols) + ", expected " + std::to_string(ref.tensor->rows()) +
                                       "x" + std::to_string(ref.tensor->cols()));
    }
    in.read(reinterpret_cast<char*>(ref.tensor->data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(ref.tensor->size())));
    if (!in) fail(Errc::corrupt_artifact, path + ": truncated tensor data for '" + name + "'");
  }
}

}  // namespace emoclass
