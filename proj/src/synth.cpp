// Copyright 2026 The oseql Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oseql/synth.hpp"

#include <array>
#include <random>
#include <string>

#include "oseql/error.hpp"

namespace oseql {
namespace {

// Draws use raw engine output so corpora are identical across standard
// libraries (distribution algorithms are implementation-defined).
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool chance(double p) {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p;
  }
  template <std::size_t N>
  const char* pick(const std::array<const char*, N>& items) {
    return items[below(N)];
  }
  int number(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1)));
  }

 private:
  std::mt19937_64 rng_;
};

constexpr std::array<const char*, 10> kVerbs = {
    "rdma", "blk", "vnc", "qcow", "virtio", "net", "usb", "ide", "scsi", "audio"};
constexpr std::array<const char*, 10> kNouns = {
    "alloc_ctx", "read_sector", "flush_queue", "init_state", "parse_header",
    "copy_frame", "map_region", "reset_dev", "load_table", "write_block"};
constexpr std::array<const char*, 8> kStructs = {
    "RDMAContext", "BlockDriverState", "VncState", "BDRVQcowState",
    "VirtIODevice", "NetClientState", "USBDevice", "IDEState"};
constexpr std::array<const char*, 8> kFields = {
    "nb_blocks", "opaque", "cluster_size", "qid", "offset", "len", "flags",
    "index"};
constexpr std::array<const char*, 8> kLocals = {
    "ret", "count", "n", "pos", "sz", "total", "idx", "val"};
constexpr std::array<const char*, 6> kCalls = {
    "qemu_mutex_lock", "qemu_mutex_unlock", "bdrv_flush", "trace_event",
    "qemu_bh_schedule", "error_report_once"};

std::string c_function(Draw& d, std::size_t statements, int label) {
  const std::string st = d.pick(kStructs);
  const std::string name = std::string(d.pick(kVerbs)) + "_" + d.pick(kNouns);
  std::string out = "static int " + name + "(" + st + " *s, int n)\n{\n";
  const std::string a = d.pick(kLocals);
  std::string b = d.pick(kLocals);
  if (b == a) b += "2";
  out += "    int " + a + " = s->" + d.pick(kFields) + ";\n";
  out += "    uint8_t *buf = g_malloc(n * " + std::to_string(d.number(2, 64)) +
         ");\n";
  if (label == 0) out += "    if (!buf) {\n        return -ENOMEM;\n    }\n";
  out += "    int " + b + " = 0;\n";
  for (std::size_t i = 0; i < statements; ++i) {
    switch (d.below(6)) {
      case 0:
        out += "    " + a + " += s->" + d.pick(kFields) + " * " +
               std::to_string(d.number(2, 99)) + ";\n";
        break;
      case 1:
        out += "    for (int i = 0; i < n; i++) {\n        buf[i] = " + a +
               " + i * " + std::to_string(d.number(2, 17)) + ";\n    }\n";
        break;
      case 2:
        out += "    if (" + b + " > " + std::to_string(d.number(1, 512)) +
               ") {\n        " + b + " -= " + a + ";\n    }\n";
        break;
      case 3:
        out += "    " + std::string(d.pick(kCalls)) + "(s);\n";
        break;
      case 4:
        out += "    s->" + std::string(d.pick(kFields)) + " = " + b + " ^ " +
               std::to_string(d.number(1, 255)) + ";\n";
        break;
      default:
        out += "    " + b + " = " + a + " >> " + std::to_string(d.number(1, 7)) +
               ";\n";
        break;
    }
  }
  out += "    memcpy(s->opaque, buf, n);\n";
  out += "    return " + b + ";\n}\n";
  return out;
}

constexpr std::array<const char*, 4> kDigests = {"MD5", "SHA-1", "SHA-256",
                                                 "SHA-512"};
constexpr std::array<const char*, 6> kJavaNames = {
    "hash", "digest", "encode", "checksum", "fingerprint", "sign"};
constexpr std::array<const char*, 6> kJavaVars = {
    "text", "input", "data", "value", "message", "payload"};

std::string java_hash_method(Draw& d, std::size_t statements) {
  const std::string arg = d.pick(kJavaVars);
  std::string out = "public static String " + std::string(d.pick(kJavaNames)) +
                    std::to_string(d.number(1, 99)) + "(String " + arg +
                    ") throws Exception {\n";
  out += "    MessageDigest md = MessageDigest.getInstance(\"" +
         std::string(d.pick(kDigests)) + "\");\n";
  out += "    byte[] bytes = " + arg + ".getBytes(\"UTF-8\");\n";
  out += "    md.update(bytes, 0, bytes.length);\n";
  out += "    byte[] raw = md.digest();\n";
  out += "    StringBuilder sb = new StringBuilder();\n";
  for (std::size_t i = 0; i + 5 < statements; ++i) {
    out += "    sb.append(\"" + std::string(d.pick(kJavaVars)) + "\".length() % " +
           std::to_string(d.number(2, 31)) + ");\n";
  }
  out += "    for (byte b : raw) {\n";
  out += "        sb.append(String.format(\"%02x\", b & 0xff));\n";
  out += "    }\n";
  out += "    return sb.toString();\n}\n";
  return out;
}

std::string java_io_method(Draw& d, std::size_t statements) {
  const std::string arg = d.pick(kJavaVars);
  std::string out = "public void copy" + std::to_string(d.number(1, 99)) +
                    "(File " + arg + ", File dest) throws IOException {\n";
  out += "    InputStream in = new FileInputStream(" + arg + ");\n";
  out += "    OutputStream out = new FileOutputStream(dest);\n";
  out += "    byte[] buf = new byte[" + std::to_string(512 * d.number(1, 16)) +
         "];\n";
  out += "    int len;\n";
  for (std::size_t i = 0; i + 5 < statements; ++i) {
    out += "    log.debug(\"chunk " + std::to_string(d.number(1, 999)) + "\");\n";
  }
  out += "    while ((len = in.read(buf)) > 0) {\n";
  out += "        out.write(buf, 0, len);\n";
  out += "    }\n";
  out += "    in.close();\n    out.close();\n}\n";
  return out;
}

}  // namespace

std::vector<CorpusSample> synthesize_corpus(const SynthOptions& o) {
  if (o.min_statements < 1 || o.max_statements < o.min_statements) {
    throw InvalidArgument("bad statement range");
  }
  if (!(o.label1_fraction >= 0.0 && o.label1_fraction <= 1.0)) {
    throw InvalidArgument("label1 fraction must be in [0,1]");
  }
  Draw d(o.seed);
  const auto span = o.max_statements - o.min_statements + 1;
  std::vector<CorpusSample> out;
  out.reserve(o.count);
  for (std::size_t i = 0; i < o.count; ++i) {
    CorpusSample s;
    s.id = o.id_prefix + std::to_string(i);
    s.label = d.chance(o.label1_fraction) ? 1 : 0;
    if (o.task == TaskKind::Single) {
      s.input = CodeInput::single(
          c_function(d, o.min_statements + d.below(span), s.label), s.id);
    } else {
      // Clones share a functionality; non-clones mix a hash and a copy method.
      std::string a = java_hash_method(d, o.min_statements + d.below(span));
      std::string b = s.label == 1
                          ? java_hash_method(d, o.min_statements + d.below(span))
                          : java_io_method(d, o.min_statements + d.below(span));
      s.input = CodeInput::paired(std::move(a), std::move(b), s.id);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace oseql
