/*
 * Copyright (C) 2026 The PriBOM Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pribom/apk/dex.hpp"

#include <zlib.h>

#include <array>
#include <cstring>

#include "pribom/apk/string_pool.hpp"
#include "pribom/error.hpp"

namespace pribom::apk {
namespace {

constexpr const char* kModule = "apk-parser";
constexpr std::size_t kHeaderSize = 0x70;
constexpr std::uint32_t kNoIndex = 0xffffffff;
constexpr std::uint32_t kEndianConstant = 0x12345678;
constexpr int kMinVersion = 35;
constexpr int kMaxVersion = 40;

// Code units per opcode, excluding payload pseudo-instructions.
constexpr std::array<std::uint8_t, 256> make_widths() {
  std::array<std::uint8_t, 256> w{};
  auto set = [&](int lo, int hi, std::uint8_t v) {
    for (int i = lo; i <= hi; ++i) w[static_cast<std::size_t>(i)] = v;
  };
  set(0x00, 0xff, 1);
  set(0x02, 0x02, 2);
  set(0x03, 0x03, 3);
  set(0x05, 0x05, 2);
  set(0x06, 0x06, 3);
  set(0x08, 0x08, 2);
  set(0x09, 0x09, 3);
  set(0x13, 0x13, 2);
  set(0x14, 0x14, 3);
  set(0x15, 0x16, 2);
  set(0x17, 0x17, 3);
  set(0x18, 0x18, 5);
  set(0x19, 0x1a, 2);
  set(0x1b, 0x1b, 3);
  set(0x1c, 0x1c, 2);
  set(0x1f, 0x20, 2);
  set(0x22, 0x23, 2);
  set(0x24, 0x26, 3);
  set(0x29, 0x29, 2);
  set(0x2a, 0x2c, 3);
  set(0x2d, 0x3d, 2);
  set(0x44, 0x6d, 2);
  set(0x6e, 0x72, 3);
  set(0x74, 0x78, 3);
  set(0x90, 0xaf, 2);
  set(0xd0, 0xe2, 2);
  set(0xfa, 0xfb, 4);
  set(0xfc, 0xfd, 3);
  set(0xfe, 0xff, 2);
  return w;
}

constexpr auto kWidths = make_widths();

bool is_wide_result(std::uint8_t op) {
  switch (op) {
    case 0x45: case 0x53: case 0x61:
    case 0x7d: case 0x7e: case 0x80: case 0x81: case 0x83:
    case 0x86: case 0x88: case 0x89: case 0x8b:
      return true;
    default:
      return (op >= 0x9b && op <= 0xa5) || (op >= 0xab && op <= 0xaf) ||
             (op >= 0xbb && op <= 0xc5) || (op >= 0xcb && op <= 0xcf);
  }
}

// Destination register of instructions that overwrite vA with a value this
// scan does not model; nullopt for instructions that write no register.
std::optional<std::uint16_t> untracked_dest(std::uint8_t op, std::uint16_t unit0) {
  const std::uint16_t a8 = unit0 >> 8;
  const std::uint16_t a4 = (unit0 >> 8) & 0xf;
  if (op == 0x20 || op == 0x21 || op == 0x23) return a4;
  if (op >= 0x2d && op <= 0x31) return a8;
  if (op >= 0x44 && op <= 0x4a) return a8;
  if (op >= 0x52 && op <= 0x58) return a4;
  if (op >= 0x60 && op <= 0x66) return a8;
  if (op >= 0x7b && op <= 0x8f) return a4;
  if (op >= 0x90 && op <= 0xaf) return a8;
  if (op >= 0xb0 && op <= 0xcf) return a4;
  if (op >= 0xd0 && op <= 0xd7) return a4;
  if (op >= 0xd8 && op <= 0xe2) return a8;
  if (op == 0xfe || op == 0xff) return a8;
  return std::nullopt;
}

InvokeKind invoke_kind(std::uint8_t op) {
  switch (op >= 0x74 ? op - 0x06 : op) {
    case 0x6e: return InvokeKind::virtual_call;
    case 0x6f: return InvokeKind::super_call;
    case 0x70: return InvokeKind::direct;
    case 0x71: return InvokeKind::static_call;
    default: return InvokeKind::interface_call;
  }
}

// Modified UTF-8 to standard UTF-8 (surrogate pairs joined, C0 80 to NUL).
std::string decode_mutf8(ByteReader& r) {
  std::string out;
  std::uint32_t pending_high = 0;
  auto flush_high = [&] {
    if (pending_high) append_utf8(out, pending_high);
    pending_high = 0;
  };
  for (;;) {
    const auto start = r.pos();
    const std::uint32_t b = r.u8();
    std::uint32_t cp;
    if (b == 0) break;
    if (b < 0x80) {
      cp = b;
    } else if ((b & 0xe0) == 0xc0) {
      cp = ((b & 0x1f) << 6) | (r.u8() & 0x3f);
    } else if ((b & 0xf0) == 0xe0) {
      const std::uint32_t b2 = r.u8();
      const std::uint32_t b3 = r.u8();
      cp = ((b & 0x0f) << 12) | ((b2 & 0x3f) << 6) | (b3 & 0x3f);
    } else {
      r.fail(ParseError::Kind::malformed, start, "invalid modified UTF-8 byte");
    }
    if (cp >= 0xd800 && cp < 0xdc00) {
      flush_high();
      pending_high = cp;
      continue;
    }
    if (cp >= 0xdc00 && cp < 0xe000 && pending_high) {
      cp = 0x10000 + ((pending_high - 0xd800) << 10) + (cp - 0xdc00);
      pending_high = 0;
    }
    flush_high();
    append_utf8(out, cp);
  }
  flush_high();
  return out;
}

struct Proto {
  std::string return_type;
  std::vector<std::string> params;
};

class DexReader {
 public:
  DexReader(Bytes data, std::string source, const DexOptions& options)
      : r_(data, kModule), source_(std::move(source)), options_(options) {}

  DexModel run() {
    read_header();
    read_strings();
    read_types();
    read_protos();
    read_methods();
    read_classes();
    return std::move(model_);
  }

 private:
  struct Section {
    std::uint32_t size = 0;
    std::uint32_t off = 0;
  };

  void read_header() {
    const auto data = r_.data();
    if (data.size() < 8 || std::memcmp(data.data(), "dex\n", 4) != 0 || data[7] != 0) {
      r_.fail(ParseError::Kind::bad_magic, 0, "not a dex file");
    }
    const auto is_digit = [](std::uint8_t c) { return c >= '0' && c <= '9'; };
    if (!is_digit(data[4]) || !is_digit(data[5]) || !is_digit(data[6])) {
      r_.fail(ParseError::Kind::bad_magic, 4, "dex version is not numeric");
    }
    const int version = (data[4] - '0') * 100 + (data[5] - '0') * 10 + (data[6] - '0');
    if (version < kMinVersion || version > kMaxVersion) {
      r_.fail(ParseError::Kind::unsupported_version, 4,
              "unsupported dex version " + std::to_string(version) + " (accepted 035-040)");
    }
    r_.seek(8);
    const auto checksum = r_.u32();
    r_.skip(20);
    const auto file_size = r_.u32();
    const auto header_size = r_.u32();
    const auto endian = r_.u32();
    if (file_size > data.size()) {
      r_.fail(ParseError::Kind::truncated, 32,
              "declared file size " + std::to_string(file_size) + " exceeds input of " +
                  std::to_string(data.size()) + " bytes");
    }
    if (header_size < kHeaderSize || file_size < kHeaderSize) {
      r_.fail(ParseError::Kind::malformed, 36, "dex header too small");
    }
    if (endian != kEndianConstant) {
      r_.fail(ParseError::Kind::malformed, 40, "unsupported endian tag");
    }
    if (options_.verify_checksum) {
      const auto actual = adler32(adler32(0L, nullptr, 0), data.data() + 12,
                                  static_cast<uInt>(file_size - 12));
      if (actual != checksum) r_.fail(ParseError::Kind::malformed, 8, "adler32 checksum mismatch");
    }
    r_ = r_.sub(0, file_size);
    r_.seek(0x38);
    strings_ = section();
    types_sec_ = section();
    protos_sec_ = section();
    section();  // field ids
    methods_sec_ = section();
    classes_sec_ = section();
  }

  Section section() {
    Section s;
    s.size = r_.u32();
    s.off = r_.u32();
    return s;
  }

  ByteReader table(const Section& s, std::size_t item_size) const {
    return r_.sub(s.off, static_cast<std::size_t>(s.size) * item_size);
  }

  void read_strings() {
    auto t = table(strings_, 4);
    ByteReader data = r_;
    strings.reserve(strings_.size);
    for (std::uint32_t i = 0; i < strings_.size; ++i) {
      data.seek(t.u32());
      data.uleb128();
      strings.push_back(decode_mutf8(data));
    }
  }

  const std::string& string_at(std::uint32_t idx) const {
    if (idx >= strings.size()) r_.fail(ParseError::Kind::out_of_range, 0, "string index out of range");
    return strings[idx];
  }

  const std::string& type_at(std::uint32_t idx) const {
    if (idx >= types.size()) r_.fail(ParseError::Kind::out_of_range, 0, "type index out of range");
    return types[idx];
  }

  void read_types() {
    auto t = table(types_sec_, 4);
    types.reserve(types_sec_.size);
    for (std::uint32_t i = 0; i < types_sec_.size; ++i) {
      const auto& desc = string_at(t.u32());
      if (!descriptor::is_valid(desc)) {
        t.fail(ParseError::Kind::malformed, t.pos() - 4, "invalid type descriptor '" + desc + "'");
      }
      types.push_back(desc);
    }
  }

  std::vector<std::string> type_list(std::uint32_t off) {
    std::vector<std::string> out;
    if (off == 0) return out;
    ByteReader l = r_;
    l.seek(off);
    const auto n = l.u32();
    if (n > l.remaining() / 2) l.fail(ParseError::Kind::truncated, off, "type list exceeds file");
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(type_at(l.u16()));
    return out;
  }

  void read_protos() {
    auto t = table(protos_sec_, 12);
    protos.reserve(protos_sec_.size);
    for (std::uint32_t i = 0; i < protos_sec_.size; ++i) {
      t.u32();  // shorty
      Proto p;
      p.return_type = type_at(t.u32());
      p.params = type_list(t.u32());
      for (const auto& param : p.params) {
        if (param == "V") t.fail(ParseError::Kind::malformed, t.pos(), "void parameter type");
      }
      protos.push_back(std::move(p));
    }
  }

  void read_methods() {
    auto t = table(methods_sec_, 8);
    method_refs.reserve(methods_sec_.size);
    for (std::uint32_t i = 0; i < methods_sec_.size; ++i) {
      const auto class_idx = t.u16();
      const auto proto_idx = t.u16();
      const auto name_idx = t.u32();
      if (proto_idx >= protos.size()) t.fail(ParseError::Kind::out_of_range, t.pos() - 6, "proto index out of range");
      const auto& owner = type_at(class_idx);
      MethodRef ref;
      // Methods invoked on array types (clone) are attributed to Object.
      ref.class_name = owner[0] == 'L' ? descriptor::class_name(owner) : "java.lang.Object";
      ref.method_name = string_at(name_idx);
      ref.param_descriptors = protos[proto_idx].params;
      ref.return_descriptor = protos[proto_idx].return_type;
      method_refs.push_back(std::move(ref));
    }
  }

  const MethodRef& method_at(std::uint32_t idx, const ByteReader& at) const {
    if (idx >= method_refs.size()) at.fail(ParseError::Kind::out_of_range, at.pos(), "method index out of range");
    return method_refs[idx];
  }

  void read_classes() {
    auto t = table(classes_sec_, 32);
    for (std::uint32_t i = 0; i < classes_sec_.size; ++i) {
      ClassDef c;
      const auto& desc = type_at(t.u32());
      if (desc[0] != 'L') t.fail(ParseError::Kind::malformed, t.pos() - 4, "class def of non-class type");
      c.name = descriptor::class_name(desc);
      c.access_flags = t.u32();
      const auto super_idx = t.u32();
      if (super_idx != kNoIndex) c.superclass = descriptor::class_name(type_at(super_idx));
      for (const auto& iface : type_list(t.u32())) c.interfaces.push_back(descriptor::class_name(iface));
      t.skip(8);  // source file, annotations
      const auto class_data_off = t.u32();
      t.u32();    // static values
      c.source = source_;
      model_.add_class(std::move(c));
      if (class_data_off != 0) read_class_data(class_data_off);
    }
  }

  void read_class_data(std::uint32_t off) {
    ByteReader d = r_;
    d.seek(off);
    const auto static_fields = d.uleb128();
    const auto instance_fields = d.uleb128();
    const auto direct_methods = d.uleb128();
    const auto virtual_methods = d.uleb128();
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(static_fields) + instance_fields; ++i) {
      d.uleb128();
      d.uleb128();
    }
    for (const auto count : {direct_methods, virtual_methods}) {
      std::uint32_t idx = 0;
      for (std::uint32_t i = 0; i < count; ++i) {
        idx += d.uleb128();
        MethodDef m;
        m.ref = method_at(idx, d);
        m.access_flags = d.uleb128();
        const auto code_off = d.uleb128();
        if (code_off != 0) m.body = read_code(code_off, m);
        model_.add_method(std::move(m));
      }
    }
  }

  MethodBody read_code(std::uint32_t off, const MethodDef& m) {
    ByteReader c = r_;
    c.seek(off);
    MethodBody body;
    body.registers_size = c.u16();
    body.ins_size = c.u16();
    c.u16();  // outs
    c.u16();  // tries
    c.u32();  // debug info
    body.insns_size = c.u32();
    if (body.ins_size > body.registers_size) {
      c.fail(ParseError::Kind::malformed, off + 2, "ins_size exceeds registers_size");
    }
    const auto raw = c.bytes(static_cast<std::size_t>(body.insns_size) * 2);
    std::vector<std::uint16_t> insns(body.insns_size);
    for (std::size_t i = 0; i < insns.size(); ++i) {
      insns[i] = static_cast<std::uint16_t>(raw[2 * i] | (raw[2 * i + 1] << 8));
    }
    scan(insns, m, body, c.absolute(off + 16));
    return body;
  }

  void scan(const std::vector<std::uint16_t>& insns, const MethodDef& m, MethodBody& body,
            std::size_t insns_abs) {
    std::vector<RegValue> regs(body.registers_size);
    if (!(m.access_flags & access::kStatic) && body.ins_size > 0) {
      regs[body.registers_size - body.ins_size] = RegValue::make_text(RegValue::Kind::this_ref, m.ref.class_name);
    }
    auto get = [&](std::uint32_t r) {
      return r < regs.size() ? regs[r] : RegValue{};
    };
    auto set = [&](std::uint32_t r, RegValue v) {
      if (r < regs.size()) regs[r] = std::move(v);
    };
    auto clear_wide = [&](std::uint32_t r) {
      set(r, {});
      set(r + 1, {});
    };

    std::optional<std::size_t> last_invoke;
    const std::span<const std::uint16_t> span(insns);
    std::size_t pc = 0;
    while (pc < insns.size()) {
      const auto width = instruction_width(span, pc);
      if (width == 0) {
        throw ParseError(kModule, ParseError::Kind::truncated, insns_abs + pc * 2,
                         "instruction overruns code item");
      }
      const std::uint16_t u0 = insns[pc];
      const auto op = static_cast<std::uint8_t>(u0 & 0xff);
      const std::uint16_t a8 = u0 >> 8;
      const std::uint16_t a4 = (u0 >> 8) & 0xf;
      const std::uint16_t b4 = u0 >> 12;
      auto unit = [&](std::size_t k) { return insns[pc + k]; };
      auto lit32 = [&] { return static_cast<std::int32_t>(unit(1) | (static_cast<std::uint32_t>(unit(2)) << 16)); };
      std::optional<std::size_t> produced;

      switch (op) {
        case 0x01: case 0x07: set(a4, get(b4)); break;
        case 0x02: case 0x08: set(a8, get(unit(1))); break;
        case 0x03: case 0x09: set(unit(1), get(unit(2))); break;
        case 0x04: clear_wide(a4); break;
        case 0x05: clear_wide(a8); break;
        case 0x06: clear_wide(unit(1)); break;
        case 0x0a: case 0x0c:
          if (last_invoke) {
            set(a8, RegValue{RegValue::Kind::invoke_result, static_cast<std::int64_t>(*last_invoke), {}});
          } else {
            set(a8, {});
          }
          break;
        case 0x0b: clear_wide(a8); break;
        case 0x0d: set(a8, {}); break;
        case 0x12: {
          const auto v = static_cast<std::int32_t>(static_cast<std::int8_t>(b4 << 4) >> 4);
          body.int_constants.push_back(v);
          set(a4, RegValue::make_int(v));
          break;
        }
        case 0x13: {
          const auto v = static_cast<std::int32_t>(static_cast<std::int16_t>(unit(1)));
          body.int_constants.push_back(v);
          set(a8, RegValue::make_int(v));
          break;
        }
        case 0x14: {
          const auto v = lit32();
          body.int_constants.push_back(v);
          set(a8, RegValue::make_int(v));
          break;
        }
        case 0x15: {
          const auto v = static_cast<std::int32_t>(static_cast<std::uint32_t>(unit(1)) << 16);
          body.int_constants.push_back(v);
          set(a8, RegValue::make_int(v));
          break;
        }
        case 0x16: case 0x17: case 0x18: case 0x19: clear_wide(a8); break;
        case 0x1a: case 0x1b: {
          const std::uint32_t idx = op == 0x1a ? unit(1) : static_cast<std::uint32_t>(lit32());
          const auto& s = string_at(idx);
          body.string_constants.push_back(s);
          set(a8, RegValue::make_text(RegValue::Kind::string_const, s));
          break;
        }
        case 0x1c:
          set(a8, RegValue::make_text(RegValue::Kind::class_const, descriptor::pretty(type_at(unit(1)))));
          break;
        case 0x22: {
          const auto t = descriptor::class_name(type_at(unit(1)));
          body.new_instances.push_back(t);
          set(a8, RegValue::make_text(RegValue::Kind::new_instance, t));
          break;
        }
        case 0x6e: case 0x6f: case 0x70: case 0x71: case 0x72:
        case 0x74: case 0x75: case 0x76: case 0x77: case 0x78: {
          Invocation inv;
          inv.kind = invoke_kind(op);
          inv.pc = static_cast<std::uint32_t>(pc);
          ByteReader at(Bytes{}, kModule, insns_abs + pc * 2);
          inv.target = method_at(unit(1), at);
          if (op <= 0x72) {
            const std::uint16_t count = b4;
            if (count > 5) {
              throw ParseError(kModule, ParseError::Kind::malformed, insns_abs + pc * 2,
                               "invoke argument count above 5");
            }
            const std::uint16_t c = unit(2);
            const std::uint16_t regs5[5] = {static_cast<std::uint16_t>(c & 0xf),
                                            static_cast<std::uint16_t>((c >> 4) & 0xf),
                                            static_cast<std::uint16_t>((c >> 8) & 0xf),
                                            static_cast<std::uint16_t>(c >> 12), a4};
            for (std::uint16_t k = 0; k < count; ++k) inv.registers.push_back(regs5[k]);
          } else {
            for (std::uint32_t k = 0; k < a8; ++k) {
              inv.registers.push_back(static_cast<std::uint16_t>(unit(2) + k));
            }
          }
          for (const auto reg : inv.registers) inv.args.push_back(get(reg));
          produced = body.invocations.size();
          body.invocations.push_back(std::move(inv));
          break;
        }
        default:
          if (const auto dest = untracked_dest(op, u0)) {
            if (is_wide_result(op)) {
              clear_wide(*dest);
            } else {
              set(*dest, {});
            }
          }
          break;
      }
      last_invoke = produced;
      pc += width;
    }
  }

  ByteReader r_;
  std::string source_;
  DexOptions options_;
  Section strings_, types_sec_, protos_sec_, methods_sec_, classes_sec_;
  std::vector<std::string> strings;
  std::vector<std::string> types;
  std::vector<Proto> protos;
  std::vector<MethodRef> method_refs;
  DexModel model_;
};

}  // namespace

const char* to_string(InvokeKind k) {
  switch (k) {
    case InvokeKind::virtual_call: return "virtual";
    case InvokeKind::super_call: return "super";
    case InvokeKind::direct: return "direct";
    case InvokeKind::static_call: return "static";
    case InvokeKind::interface_call: return "interface";
  }
  return "virtual";
}

std::size_t instruction_width(std::span<const std::uint16_t> insns, std::size_t pc) {
  if (pc >= insns.size()) return 0;
  const auto u0 = insns[pc];
  std::size_t width = kWidths[u0 & 0xff];
  if ((u0 & 0xff) == 0x00 && (u0 >> 8) != 0) {
    if (pc + 2 > insns.size()) return 0;
    const std::size_t n = insns[pc + 1];
    switch (u0 >> 8) {
      case 0x01: width = n * 2 + 4; break;
      case 0x02: width = n * 4 + 2; break;
      case 0x03: {
        if (pc + 4 > insns.size()) return 0;
        const std::size_t elem = n;
        const std::size_t count = insns[pc + 2] | (static_cast<std::size_t>(insns[pc + 3]) << 16);
        width = (elem * count + 1) / 2 + 4;
        break;
      }
      default: width = 1; break;
    }
  }
  return width <= insns.size() - pc ? width : 0;
}

const ClassDef* DexModel::find_class(const std::string& dotted) const {
  const auto it = class_index_.find(dotted);
  return it == class_index_.end() ? nullptr : &classes_[it->second];
}

const MethodDef* DexModel::find_method(const MethodRef& ref) const {
  const auto it = method_index_.find(ref);
  return it == method_index_.end() ? nullptr : &methods_[it->second];
}

std::vector<const MethodDef*> DexModel::methods_of(const std::string& dotted) const {
  std::vector<const MethodDef*> out;
  MethodRef lo;
  lo.class_name = dotted;
  for (auto it = method_index_.lower_bound(lo);
       it != method_index_.end() && it->first.class_name == dotted; ++it) {
    out.push_back(&methods_[it->second]);
  }
  return out;
}

void DexModel::add_class(ClassDef c) {
  if (class_index_.count(c.name)) {
    const auto& prior = classes_[class_index_[c.name]];
    throw Error(kModule, "duplicate class '" + c.name + "' in " + c.source + " (already defined in " +
                             prior.source + ")");
  }
  class_index_.emplace(c.name, classes_.size());
  classes_.push_back(std::move(c));
}

void DexModel::add_method(MethodDef m) {
  if (method_index_.count(m.ref)) return;
  method_index_.emplace(m.ref, methods_.size());
  methods_.push_back(std::move(m));
}

void DexModel::merge(DexModel other) {
  for (auto& c : other.classes_) add_class(std::move(c));
  for (auto& m : other.methods_) add_method(std::move(m));
}

DexModel parse_dex(Bytes data, const std::string& source, const DexOptions& options) {
  return DexReader(data, source, options).run();
}

DexModel parse_multidex(const std::vector<std::pair<std::string, std::vector<std::uint8_t>>>& dexes,
                        const DexOptions& options) {
  DexModel model;
  for (const auto& [name, bytes] : dexes) model.merge(parse_dex(Bytes(bytes), name, options));
  return model;
}

}  // namespace pribom::apk
