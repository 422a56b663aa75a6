// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgediffuse/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "edgediffuse/binary_io.hpp"

namespace edgediffuse {

namespace {

constexpr std::string_view kMagic = "EDGECKPT";
constexpr std::uint32_t kVersion = 1;

void write_section(ByteWriter& out, std::string_view tag, const std::string& payload) {
  out.bytes(tag);
  out.u64(payload.size());
  out.bytes(payload);
}

void write_tensors(ByteWriter& w, const ModelParams& p) {
  std::uint32_t count = 0;
  p.visit([&count](const std::string&, const Matrix&) { ++count; });
  w.u32(count);
  p.visit([&w](const std::string& name, const Matrix& m) {
    w.u16(static_cast<std::uint16_t>(name.size()));
    w.bytes(name);
    w.u32(static_cast<std::uint32_t>(m.rows()));
    w.u32(static_cast<std::uint32_t>(m.cols()));
    for (double x : m.data()) w.f64(x);
  });
}

void read_tensors(ByteReader& r, ModelParams& p) {
  std::uint32_t expected = 0;
  p.visit([&expected](const std::string&, const Matrix&) { ++expected; });
  if (r.u32() != expected) throw std::runtime_error("checkpoint: tensor count does not match architecture");
  p.visit([&r](const std::string& name, Matrix& m) {
    const std::uint16_t len = r.u16();
    if (r.bytes(len) != name) throw std::runtime_error("checkpoint: unexpected tensor " + name);
    const std::uint32_t rows = r.u32();
    const std::uint32_t cols = r.u32();
    if (rows != static_cast<std::uint32_t>(m.rows()) || cols != static_cast<std::uint32_t>(m.cols())) {
      throw std::runtime_error("checkpoint: shape mismatch for " + name);
    }
    for (double& x : m.data()) x = r.f64();
  });
}

}  // namespace

std::string checkpoint_to_bytes(const Checkpoint& ckpt) {
  ByteWriter out;
  out.bytes(kMagic);
  out.u32(kVersion);
  out.u32(2 + (ckpt.prior ? 1 : 0) + (ckpt.state ? 1 : 0));

  const Architecture& a = ckpt.params.arch;
  ByteWriter arch;
  arch.u32(static_cast<std::uint32_t>(a.layers));
  arch.u32(static_cast<std::uint32_t>(a.hidden));
  arch.u32(static_cast<std::uint32_t>(a.degree_clamp));
  arch.u32(static_cast<std::uint32_t>(a.steps));
  write_section(out, "ARCH", arch.str());

  ByteWriter parm;
  write_tensors(parm, ckpt.params);
  write_section(out, "PARM", parm.str());

  if (ckpt.prior) {
    ByteWriter prio;
    ckpt.prior->serialize(prio);
    write_section(out, "PRIO", prio.str());
  }
  if (ckpt.state) {
    ByteWriter trns;
    trns.i64(ckpt.state->step);
    trns.u32(static_cast<std::uint32_t>(ckpt.state->epoch));
    write_tensors(trns, ckpt.state->momentum);
    write_section(out, "TRNS", trns.str());
  }
  return out.take();
}

Checkpoint checkpoint_from_bytes(std::string_view bytes) {
  ByteReader r(bytes);
  if (bytes.size() < kMagic.size() || r.bytes(kMagic.size()) != kMagic) {
    throw std::runtime_error("checkpoint: bad magic");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  const std::uint32_t sections = r.u32();

  Checkpoint ckpt;
  bool have_arch = false;
  bool have_params = false;
  for (std::uint32_t s = 0; s < sections; ++s) {
    const std::string tag(r.bytes(4));
    const std::uint64_t len = r.u64();
    ByteReader body(r.bytes(len));
    if (tag == "ARCH") {
      Architecture a;
      a.layers = static_cast<int>(body.u32());
      a.hidden = static_cast<int>(body.u32());
      a.degree_clamp = static_cast<int>(body.u32());
      a.steps = static_cast<int>(body.u32());
      ckpt.params = ModelParams::zeros(a);
      have_arch = true;
    } else if (tag == "PARM") {
      if (!have_arch) throw std::runtime_error("checkpoint: PARM before ARCH");
      read_tensors(body, ckpt.params);
      have_params = true;
    } else if (tag == "PRIO") {
      ckpt.prior = DegreePrior::deserialize(body);
    } else if (tag == "TRNS") {
      if (!have_arch) throw std::runtime_error("checkpoint: TRNS before ARCH");
      TrainingState st;
      st.step = body.i64();
      st.epoch = static_cast<int>(body.u32());
      st.momentum = ModelParams::zeros(ckpt.params.arch);
      read_tensors(body, st.momentum);
      ckpt.state = std::move(st);
    }
    // Unknown tags are skipped for forward compatibility.
  }
  if (!have_params) throw std::runtime_error("checkpoint: missing parameters");
  if (!ckpt.params.all_finite()) throw std::runtime_error("checkpoint: non-finite parameters");
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  const std::string bytes = checkpoint_to_bytes(ckpt);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return checkpoint_from_bytes(ss.str());
}

}  // namespace edgediffuse
