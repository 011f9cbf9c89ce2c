#!/usr/bin/env python3
# Copyright (C) 2026 The PriBOM Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Authors the binary test fixtures under tests/fixtures/.

The writers here are deliberately independent of the C++ decoders: they
emit AXML, resources.arsc and DEX straight from the published layouts so
the decoders are checked against bytes they did not produce.  See
tests/fixtures/PROVENANCE.md for what each fixture contains.

Usage: python3 scripts/make_fixtures.py [output-dir]
"""

import hashlib
import io
import os
import struct
import sys
import zipfile
import zlib

ANDROID_NS = "http://schemas.android.com/apk/res/android"

# Framework attribute resource ids used in the resource map.
ATTR_IDS = {
    "icon": 0x01010002,
    "name": 0x01010003,
    "label": 0x01010001,
    "id": 0x010100D0,
    "background": 0x010100D4,
    "layout_width": 0x010100F4,
    "layout_height": 0x010100F5,
    "src": 0x01010119,
    "onClick": 0x0101026F,
    "text": 0x0101014F,
    "title": 0x010101E1,
    "versionCode": 0x0101021B,
    "versionName": 0x0101021C,
    "minSdkVersion": 0x0101020C,
    "targetSdkVersion": 0x01010270,
}

TYPE_REFERENCE = 0x01
TYPE_STRING = 0x03
TYPE_INT_DEC = 0x10
TYPE_INT_BOOLEAN = 0x12


# --------------------------------------------------------------------------
# String pools (shared by AXML and ARSC)


def _len16(n):
    if n > 0x7FFF:
        return struct.pack("<HH", 0x8000 | (n >> 16), n & 0xFFFF)
    return struct.pack("<H", n)


def _len8(n):
    if n > 0x7F:
        return bytes([0x80 | (n >> 8), n & 0xFF])
    return bytes([n])


def string_pool(strings, utf8):
    data = bytearray()
    offsets = []
    for s in strings:
        offsets.append(len(data))
        if utf8:
            raw = s.encode("utf-8")
            data += _len8(len(s)) + _len8(len(raw)) + raw + b"\x00"
        else:
            raw = s.encode("utf-16-le")
            data += _len16(len(s)) + raw + b"\x00\x00"
    while len(data) % 4:
        data += b"\x00"
    header_size = 28
    strings_start = header_size + 4 * len(strings)
    size = strings_start + len(data)
    flags = 0x100 if utf8 else 0
    out = struct.pack("<HHIIIIII", 0x0001, header_size, size, len(strings), 0,
                      flags, strings_start, 0)
    out += b"".join(struct.pack("<I", o) for o in offsets)
    return out + bytes(data)


# --------------------------------------------------------------------------
# Binary XML


class Element:
    def __init__(self, name, attrs=(), children=()):
        self.name = name
        # attrs: list of (ns_uri or None, name, kind, value)
        # kind: "string" | "ref" | "int" | "bool"
        self.attrs = list(attrs)
        self.children = list(children)


def encode_axml(root, utf8):
    # Attribute names that carry a framework id must lead the pool so the
    # resource map lines up with string indices.
    attr_names = []

    def walk(e):
        for ns, name, _, _ in e.attrs:
            if ns == ANDROID_NS and name not in attr_names:
                attr_names.append(name)
        for c in e.children:
            walk(c)

    walk(root)
    strings = list(attr_names)

    def intern(s):
        if s not in strings:
            strings.append(s)
        return strings.index(s)

    def collect(e):
        intern(e.name)
        for ns, name, kind, value in e.attrs:
            intern(name)
            if ns:
                intern(ns)
            if kind == "string":
                intern(value)
        for c in e.children:
            collect(c)

    intern("android")
    intern(ANDROID_NS)
    collect(root)

    body = bytearray()
    line = [1]

    def node(chunk_type, ext):
        hdr = struct.pack("<HHIII", chunk_type, 16, 16 + len(ext), line[0],
                          0xFFFFFFFF)
        line[0] += 1
        return hdr + ext

    body += node(0x0100, struct.pack("<II", strings.index("android"),
                                     strings.index(ANDROID_NS)))

    def emit(e):
        attrs = bytearray()
        id_index = 0
        for i, (ns, name, kind, value) in enumerate(e.attrs):
            ns_idx = strings.index(ns) if ns else 0xFFFFFFFF
            raw = 0xFFFFFFFF
            if kind == "string":
                raw = strings.index(value)
                dtype, data = TYPE_STRING, raw
            elif kind == "ref":
                dtype, data = TYPE_REFERENCE, value
            elif kind == "int":
                dtype, data = TYPE_INT_DEC, value & 0xFFFFFFFF
            elif kind == "bool":
                dtype, data = TYPE_INT_BOOLEAN, 0xFFFFFFFF if value else 0
            else:
                raise ValueError(kind)
            if ns == ANDROID_NS and name == "id":
                id_index = i + 1
            attrs += struct.pack("<IIIHBBI", ns_idx, strings.index(name), raw,
                                 8, 0, dtype, data)
        ext = struct.pack("<IIHHHHHH", 0xFFFFFFFF, strings.index(e.name), 20, 20,
                          len(e.attrs), id_index, 0, 0)
        body.extend(node(0x0102, ext + bytes(attrs)))
        for c in e.children:
            emit(c)
        body.extend(node(0x0103, struct.pack("<II", 0xFFFFFFFF,
                                             strings.index(e.name))))

    emit(root)
    body += node(0x0101, struct.pack("<II", strings.index("android"),
                                     strings.index(ANDROID_NS)))

    pool = string_pool(strings, utf8)
    resmap = struct.pack("<HHI", 0x0180, 8, 8 + 4 * len(attr_names))
    resmap += b"".join(struct.pack("<I", ATTR_IDS[n]) for n in attr_names)
    payload = pool + resmap + bytes(body)
    return struct.pack("<HHI", 0x0003, 8, 8 + len(payload)) + payload


def A(name, kind, value, ns=ANDROID_NS):
    return (ns, name, kind, value)


# --------------------------------------------------------------------------
# Resource table

PACKAGE_ID = 0x7F
PACKAGE_NAME = "com.example.pribomfixture"
TYPE_NAMES = ["attr", "drawable", "layout", "menu", "mipmap", "color",
              "dimen", "string", "id"]

# type name -> {entry index: (key, value kind, value)}
RESOURCES = {
    "drawable": {0x0000: ("pin", "file", "res/drawable/pin.png")},
    "layout": {0x0000: ("main", "file", "res/layout/main.xml")},
    "menu": {0x0000: ("main_menu", "file", "res/menu/main_menu.xml")},
    "string": {0x0000: ("app_name", "string", "PriBOM Fixture")},
    "id": {
        0x0037: ("action_share", "id", 0),
        0x0038: ("btn_nearby", "id", 0),
        0x0039: ("btn_locate", "id", 0),
        0x003A: ("txt_status", "id", 0),
    },
}


def res_id(type_name, entry):
    return (PACKAGE_ID << 24) | ((TYPE_NAMES.index(type_name) + 1) << 16) | entry


def encode_arsc():
    global_strings = []
    keys = []
    for type_name in TYPE_NAMES:
        for idx, (key, kind, value) in sorted(RESOURCES.get(type_name, {}).items()):
            if key not in keys:
                keys.append(key)
            if kind in ("file", "string") and value not in global_strings:
                global_strings.append(value)

    type_pool = string_pool(TYPE_NAMES, utf8=False)
    key_pool = string_pool(keys, utf8=True)

    chunks = bytearray()
    for t, type_name in enumerate(TYPE_NAMES, start=1):
        entries = RESOURCES.get(type_name, {})
        count = (max(entries) + 1) if entries else 0
        spec = struct.pack("<BBHI", t, 0, 0, count)
        spec += b"".join(struct.pack("<I", 0) for _ in range(count))
        chunks += struct.pack("<HHI", 0x0202, 16, 8 + len(spec)) + spec
        if not entries:
            continue
        config = struct.pack("<I", 64) + bytes(60)
        header_size = 8 + 12 + len(config)
        entries_start = header_size + 4 * count
        offsets = []
        data = bytearray()
        for i in range(count):
            if i not in entries:
                offsets.append(0xFFFFFFFF)
                continue
            offsets.append(len(data))
            key, kind, value = entries[i]
            if kind in ("file", "string"):
                dtype, dval = TYPE_STRING, global_strings.index(value)
            else:
                dtype, dval = TYPE_INT_BOOLEAN, 0
            data += struct.pack("<HHI", 8, 0, keys.index(key))
            data += struct.pack("<HBBI", 8, 0, dtype, dval)
        body = struct.pack("<BBHII", t, 0, 0, count, entries_start) + config
        body += b"".join(struct.pack("<I", o) for o in offsets) + bytes(data)
        chunks += struct.pack("<HHI", 0x0201, header_size, 8 + len(body)) + body

    name16 = PACKAGE_NAME.encode("utf-16-le").ljust(256, b"\x00")
    pkg_header_size = 288
    type_strings_off = pkg_header_size
    key_strings_off = type_strings_off + len(type_pool)
    pkg_body = type_pool + key_pool + bytes(chunks)
    pkg = struct.pack("<HHII", 0x0200, pkg_header_size,
                      pkg_header_size + len(pkg_body), PACKAGE_ID)
    pkg += name16
    pkg += struct.pack("<IIIII", type_strings_off, len(TYPE_NAMES),
                       key_strings_off, len(keys), 0)
    pkg += pkg_body

    gpool = string_pool(global_strings, utf8=True)
    payload = gpool + pkg
    return struct.pack("<HHII", 0x0002, 12, 12 + len(payload), 1) + payload


# --------------------------------------------------------------------------
# DEX


ACC_PUBLIC = 0x1
ACC_PRIVATE = 0x2
ACC_STATIC = 0x8
ACC_FINAL = 0x10
ACC_INTERFACE = 0x200
ACC_ABSTRACT = 0x400
ACC_ANNOTATION = 0x2000
ACC_CONSTRUCTOR = 0x10000


def uleb(n):
    out = bytearray()
    while True:
        b = n & 0x7F
        n >>= 7
        if n:
            out.append(b | 0x80)
        else:
            out.append(b)
            return bytes(out)


def shorty_char(desc):
    return "L" if desc[0] in "L[" else desc[0]


class Method:
    def __init__(self, name, params, ret, access, code=None, registers=0,
                 ins=0, outs=0):
        self.name = name
        self.params = list(params)
        self.ret = ret
        self.access = access
        self.code = code  # list of Insn or None
        self.registers = registers
        self.ins = ins
        self.outs = outs


class ClassDef:
    def __init__(self, name, superclass, access, interfaces=(), methods=()):
        self.name = name
        self.superclass = superclass
        self.access = access
        self.interfaces = list(interfaces)
        self.methods = list(methods)


# Instructions are symbolic tuples resolved to code units once the index
# tables are final.
def invoke(kind, cls, name, params, ret, regs):
    return ("invoke", kind, (cls, name, tuple(params), ret), tuple(regs))


def invoke_range(kind, cls, name, params, ret, first, count):
    return ("invoke_range", kind, (cls, name, tuple(params), ret), first, count)


INVOKE_OPS = {"virtual": 0x6E, "super": 0x6F, "direct": 0x70, "static": 0x71,
              "interface": 0x72}


class DexBuilder:
    def __init__(self, classes):
        self.classes = classes
        self.strings = set()
        self.types = set()
        self.protos = set()
        self.methods = set()
        for c in classes:
            self.types.add(c.name)
            if c.superclass:
                self.types.add(c.superclass)
            self.types.update(c.interfaces)
            for m in c.methods:
                self._add_method((c.name, m.name, tuple(m.params), m.ret))
                for insn in m.code or []:
                    if insn[0] in ("invoke", "invoke_range"):
                        self._add_method(insn[2])
                    elif insn[0] in ("new-instance", "check-cast"):
                        self.types.add(insn[2])
                    elif insn[0] == "const-string":
                        self.strings.add(insn[2])
        self.strings.update(self.types)

    def _add_method(self, ref):
        cls, name, params, ret = ref
        self.types.add(cls)
        self.types.add(ret)
        self.types.update(params)
        shorty = shorty_char(ret) + "".join(shorty_char(p) for p in params)
        self.strings.update([name, shorty])
        self.protos.add((shorty, ret, params))
        self.methods.add(ref)

    def build(self):
        strings = sorted(self.strings, key=lambda s: s.encode("utf-8"))
        sidx = {s: i for i, s in enumerate(strings)}
        types = sorted(self.types, key=lambda t: sidx[t])
        tidx = {t: i for i, t in enumerate(types)}
        protos = sorted(self.protos,
                        key=lambda p: (tidx[p[1]], [tidx[x] for x in p[2]]))
        pidx = {(p[1], p[2]): i for i, p in enumerate(protos)}
        methods = sorted(self.methods,
                         key=lambda m: (tidx[m[0]], sidx[m[1]], pidx[(m[3], m[2])]))
        midx = {m: i for i, m in enumerate(methods)}

        header_size = 0x70
        off = header_size
        string_ids_off = off
        off += 4 * len(strings)
        type_ids_off = off
        off += 4 * len(types)
        proto_ids_off = off
        off += 12 * len(protos)
        method_ids_off = off
        off += 8 * len(methods)
        class_defs_off = off
        off += 32 * len(self.classes)
        data_off = off

        data = bytearray()

        def align(n):
            while (data_off + len(data)) % n:
                data.append(0)

        def here():
            return data_off + len(data)

        type_lists = {}
        map_counts = {"type_list": 0, "code": 0, "class_data": 0,
                      "string_data": 0}
        map_offsets = {}

        def type_list(items):
            items = tuple(items)
            if not items:
                return 0
            if items in type_lists:
                return type_lists[items]
            align(4)
            map_offsets.setdefault("type_list", here())
            o = here()
            data.extend(struct.pack("<I", len(items)))
            for t in items:
                data.extend(struct.pack("<H", tidx[t]))
            type_lists[items] = o
            map_counts["type_list"] += 1
            return o

        proto_params_off = [type_list(p[2]) for p in protos]
        iface_offs = [type_list(c.interfaces) for c in self.classes]

        code_offs = {}
        for c in self.classes:
            for m in c.methods:
                if m.code is None:
                    continue
                align(4)
                map_offsets.setdefault("code", here())
                insns = self._assemble(m.code, sidx, tidx, midx)
                code_offs[(c.name, m.name, tuple(m.params), m.ret)] = here()
                data.extend(struct.pack("<HHHHII", m.registers, m.ins, m.outs,
                                        0, 0, len(insns)))
                for u in insns:
                    data.extend(struct.pack("<H", u))
                map_counts["code"] += 1

        class_data_offs = []
        for c in self.classes:
            direct = [m for m in c.methods
                      if m.access & (ACC_STATIC | ACC_PRIVATE | ACC_CONSTRUCTOR)]
            virtual = [m for m in c.methods if m not in direct]
            if not c.methods:
                class_data_offs.append(0)
                continue
            map_offsets.setdefault("class_data", here())
            class_data_offs.append(here())
            data.extend(uleb(0) + uleb(0) + uleb(len(direct)) + uleb(len(virtual)))
            for group in (direct, virtual):
                refs = sorted(group, key=lambda m: midx[(c.name, m.name,
                                                         tuple(m.params), m.ret)])
                prev = 0
                for m in refs:
                    key = (c.name, m.name, tuple(m.params), m.ret)
                    data.extend(uleb(midx[key] - prev) + uleb(m.access) +
                                uleb(code_offs.get(key, 0)))
                    prev = midx[key]
            map_counts["class_data"] += 1

        string_data_offs = []
        map_offsets["string_data"] = here()
        for s in strings:
            string_data_offs.append(here())
            data.extend(uleb(len(s)) + s.encode("utf-8") + b"\x00")
            map_counts["string_data"] += 1

        align(4)
        map_off = here()
        items = [
            (0x0000, 1, 0),
            (0x0001, len(strings), string_ids_off),
            (0x0002, len(types), type_ids_off),
            (0x0003, len(protos), proto_ids_off),
            (0x0005, len(methods), method_ids_off),
            (0x0006, len(self.classes), class_defs_off),
        ]
        if map_counts["type_list"]:
            items.append((0x1001, map_counts["type_list"], map_offsets["type_list"]))
        if map_counts["code"]:
            items.append((0x2001, map_counts["code"], map_offsets["code"]))
        if map_counts["class_data"]:
            items.append((0x2000, map_counts["class_data"], map_offsets["class_data"]))
        items.append((0x2002, map_counts["string_data"], map_offsets["string_data"]))
        items.append((0x1000, 1, map_off))
        items.sort(key=lambda it: it[2])
        data.extend(struct.pack("<I", len(items)))
        for t, n, o in items:
            data.extend(struct.pack("<HHII", t, 0, n, o))

        out = bytearray(header_size)
        for o in string_data_offs:
            out += struct.pack("<I", o)
        for t in types:
            out += struct.pack("<I", sidx[t])
        for (shorty, ret, params), poff in zip(protos, proto_params_off):
            out += struct.pack("<III", sidx[shorty], tidx[ret], poff)
        for (cls, name, params, ret) in methods:
            out += struct.pack("<HHI", tidx[cls], pidx[(ret, params)], sidx[name])
        for c, ioff, cdoff in zip(self.classes, iface_offs, class_data_offs):
            sup = tidx[c.superclass] if c.superclass else 0xFFFFFFFF
            out += struct.pack("<IIIIIIII", tidx[c.name], c.access, sup, ioff,
                               0xFFFFFFFF, 0, cdoff, 0)
        assert len(out) == data_off
        out += data

        struct.pack_into("<8s", out, 0, b"dex\n035\x00")
        struct.pack_into("<IIIIIIIIIIIIIIIIIIII", out, 32,
                         len(out), header_size, 0x12345678, 0, 0, map_off,
                         len(strings), string_ids_off, len(types), type_ids_off,
                         len(protos), proto_ids_off, 0, 0,
                         len(methods), method_ids_off,
                         len(self.classes), class_defs_off,
                         len(out) - data_off, data_off)
        out[12:32] = hashlib.sha1(bytes(out[32:])).digest()
        struct.pack_into("<I", out, 8, zlib.adler32(bytes(out[12:])) & 0xFFFFFFFF)
        return bytes(out)

    @staticmethod
    def _assemble(code, sidx, tidx, midx):
        units = []
        for insn in code:
            op = insn[0]
            if op == "invoke":
                _, kind, ref, regs = insn
                regs = list(regs) + [0] * (5 - len(regs))
                c, d, e, f, g = regs
                units += [(len(insn[3]) << 12) | (g << 8) | INVOKE_OPS[kind],
                          midx[ref], (f << 12) | (e << 8) | (d << 4) | c]
            elif op == "invoke_range":
                _, kind, ref, first, count = insn
                units += [(count << 8) | (INVOKE_OPS[kind] + 6), midx[ref], first]
            elif op == "const":
                _, reg, value = insn
                value &= 0xFFFFFFFF
                units += [(reg << 8) | 0x14, value & 0xFFFF, value >> 16]
            elif op == "const/4":
                _, reg, value = insn
                units += [((value & 0xF) << 12) | (reg << 8) | 0x12]
            elif op == "const-string":
                _, reg, s = insn
                units += [(reg << 8) | 0x1A, sidx[s]]
            elif op == "new-instance":
                _, reg, t = insn
                units += [(reg << 8) | 0x22, tidx[t]]
            elif op == "check-cast":
                _, reg, t = insn
                units += [(reg << 8) | 0x1F, tidx[t]]
            elif op == "move-result":
                units += [(insn[1] << 8) | 0x0A]
            elif op == "move-result-object":
                units += [(insn[1] << 8) | 0x0C]
            elif op == "move-object":
                units += [(insn[2] << 12) | (insn[1] << 8) | 0x07]
            elif op == "return-void":
                units += [0x000E]
            elif op == "return":
                units += [(insn[1] << 8) | 0x0F]
            elif op == "return-object":
                units += [(insn[1] << 8) | 0x11]
            elif op == "raw":
                units += list(insn[1])
            else:
                raise ValueError(op)
        return units


V = "V"
OBJECT = "Ljava/lang/Object;"
STRING = "Ljava/lang/String;"
ACTIVITY = "Landroid/app/Activity;"
BUNDLE = "Landroid/os/Bundle;"
VIEW = "Landroid/view/View;"
CONTEXT = "Landroid/content/Context;"
LOCATION = "Landroid/location/Location;"
LOCATION_MANAGER = "Landroid/location/LocationManager;"
ON_CLICK = "Landroid/view/View$OnClickListener;"
MENU_ITEM = "Landroid/view/MenuItem;"
ANNOTATION = "Ljava/lang/annotation/Annotation;"

MAIN = "Lcom/example/MainActivity;"
BASE = "Lcom/example/BaseActivity;"
LOC1 = "Lcom/example/Loc$1;"
NETUTIL = "Lcom/example/NetUtil;"
AL_UTIL = "Lcom/applovin/impl/sdk/c;"
AL_DEBUG = "Lcom/applovin/impl/mediation/debugger/ui/b/a;"
AL_SDK = "Lcom/applovin/sdk/AppLovinSdk;"
PROVIDER = "Ljavax/inject/Provider;"


def ctor(owner, superclass, params=()):
    regs = 1 + len(params)
    return Method("<init>", params, V, ACC_PUBLIC | ACC_CONSTRUCTOR, [
        invoke("direct", superclass, "<init>", [], V, [regs - 1 - len(params)]),
        ("return-void",),
    ], registers=regs, ins=regs, outs=1)


def get_last_known(receiver_reg, provider_reg):
    return invoke("virtual", LOCATION_MANAGER, "getLastKnownLocation", [STRING],
                  LOCATION, [receiver_reg, provider_reg])


def javax_inject_classes():
    annotation = ACC_PUBLIC | ACC_INTERFACE | ACC_ABSTRACT | ACC_ANNOTATION
    abstract = ACC_PUBLIC | ACC_ABSTRACT
    return [
        ClassDef("Ljavax/inject/Inject;", OBJECT, annotation, [ANNOTATION]),
        ClassDef("Ljavax/inject/Named;", OBJECT, annotation, [ANNOTATION],
                 [Method("value", [], STRING, abstract)]),
        ClassDef(PROVIDER, OBJECT,
                 ACC_PUBLIC | ACC_INTERFACE | ACC_ABSTRACT, [],
                 [Method("get", [], OBJECT, abstract)]),
        ClassDef("Ljavax/inject/Qualifier;", OBJECT, annotation, [ANNOTATION]),
        ClassDef("Ljavax/inject/Scope;", OBJECT, annotation, [ANNOTATION]),
        ClassDef("Ljavax/inject/Singleton;", OBJECT, annotation, [ANNOTATION]),
    ]


def applovin_classes():
    return [
        ClassDef(AL_UTIL, OBJECT, ACC_PUBLIC | ACC_FINAL, [], [
            ctor(AL_UTIL, OBJECT),
            Method("a", [CONTEXT], LOCATION, ACC_PUBLIC | ACC_STATIC, [
                ("const-string", 0, "location"),
                invoke("virtual", CONTEXT, "getSystemService", [STRING], OBJECT,
                       [2, 0]),
                ("move-result-object", 0),
                ("check-cast", 0, LOCATION_MANAGER),
                ("const-string", 1, "network"),
                get_last_known(0, 1),
                ("move-result-object", 0),
                ("return-object", 0),
            ], registers=3, ins=1, outs=2),
            Method("b", [STRING], "Z", ACC_PUBLIC | ACC_STATIC, [
                ("const/4", 0, 1),
                ("return", 0),
            ], registers=2, ins=1, outs=0),
        ]),
        ClassDef(AL_DEBUG, ACTIVITY, ACC_PUBLIC, [], [
            ctor(AL_DEBUG, ACTIVITY),
            Method("onCreate", [BUNDLE], V, ACC_PUBLIC, [
                invoke("super", ACTIVITY, "onCreate", [BUNDLE], V, [0, 1]),
                ("return-void",),
            ], registers=2, ins=2, outs=2),
            Method("onOptionsItemSelected", [MENU_ITEM], "Z", ACC_PUBLIC, [
                invoke("static", AL_UTIL, "a", [CONTEXT], LOCATION, [1]),
                ("const/4", 0, 0),
                invoke("interface", PROVIDER, "get", [], OBJECT, [0]),
                ("const/4", 0, 1),
                ("return", 0),
            ], registers=3, ins=2, outs=1),
        ]),
        ClassDef(AL_SDK, OBJECT, ACC_PUBLIC, [], [
            ctor(AL_SDK, OBJECT),
            Method("getInstance", [CONTEXT], AL_SDK, ACC_PUBLIC | ACC_STATIC, [
                ("new-instance", 0, AL_SDK),
                invoke("direct", AL_SDK, "<init>", [], V, [0]),
                ("return-object", 0),
            ], registers=2, ins=1, outs=1),
            Method("initializeSdk", [], V, ACC_PUBLIC, [
                ("return-void",),
            ], registers=1, ins=1, outs=0),
        ]),
    ]


def app_classes():
    packed_switch = [
        0x012B, 0x0008, 0x0000,  # packed-switch v1, +8
        0x0012,                  # const/4 v0, #0
        0x000F,                  # return v0
        0x1012,                  # const/4 v0, #1
        0x000F,                  # return v0
        0x0000,                  # nop (payload alignment)
        0x0100, 0x0001, 0x0007, 0x0000, 0x0005, 0x0000,  # payload: key 7 -> +5
    ]
    return [
        ClassDef(BASE, ACTIVITY, ACC_PUBLIC | ACC_ABSTRACT, [], [
            ctor(BASE, ACTIVITY),
        ]),
        ClassDef(MAIN, BASE, ACC_PUBLIC, [ON_CLICK], [
            ctor(MAIN, BASE),
            Method("onCreate", [BUNDLE], V, ACC_PUBLIC, [
                invoke("super", BASE, "onCreate", [BUNDLE], V, [3, 4]),
                ("const", 0, res_id("layout", 0)),
                invoke("virtual", MAIN, "setContentView", ["I"], V, [3, 0]),
                ("const", 0, res_id("id", 0x38)),
                invoke("virtual", MAIN, "findViewById", ["I"], VIEW, [3, 0]),
                ("move-result-object", 1),
                ("new-instance", 2, LOC1),
                invoke("direct", LOC1, "<init>", [MAIN], V, [2, 3]),
                invoke("virtual", VIEW, "setOnClickListener", [ON_CLICK], V, [1, 2]),
                ("const-string", 0, "com.example.Plugin"),
                invoke("static", "Ljava/lang/Class;", "forName", [STRING],
                       "Ljava/lang/Class;", [0]),
                ("return-void",),
            ], registers=5, ins=2, outs=2),
            Method("onClick", [VIEW], V, ACC_PUBLIC, [
                ("const-string", 0, "location"),
                invoke("virtual", MAIN, "getSystemService", [STRING], OBJECT, [2, 0]),
                ("move-result-object", 0),
                ("check-cast", 0, LOCATION_MANAGER),
                ("const-string", 1, "gps"),
                get_last_known(0, 1),
                ("return-void",),
            ], registers=4, ins=2, outs=2),
            Method("onLocate", [VIEW], V, ACC_PUBLIC, [
                invoke_range("virtual", MAIN, "onClick", [VIEW], V, 0, 2),
                ("return-void",),
            ], registers=2, ins=2, outs=2),
            Method("bindDynamic", ["I"], V, ACC_PUBLIC, [
                invoke("virtual", MAIN, "findViewById", ["I"], VIEW, [0, 1]),
                ("return-void",),
            ], registers=2, ins=2, outs=2),
            Method("classify", ["I"], "I", ACC_PRIVATE, [("raw", packed_switch)],
                   registers=2, ins=2, outs=0),
        ]),
        ClassDef(LOC1, OBJECT, ACC_FINAL, [ON_CLICK], [
            ctor(LOC1, OBJECT, [MAIN]),
            Method("onClick", [VIEW], V, ACC_PUBLIC, [
                ("const/4", 0, 0),
                invoke("static", AL_UTIL, "a", [CONTEXT], LOCATION, [0]),
                invoke("static", NETUTIL, "isOnline", [CONTEXT], "Z", [0]),
                ("return-void",),
            ], registers=3, ins=2, outs=1),
        ]),
        ClassDef(NETUTIL, OBJECT, ACC_PUBLIC | ACC_FINAL, [], [
            Method("isOnline", [CONTEXT], "Z", ACC_PUBLIC | ACC_STATIC, [
                ("const-string", 0, "connectivity"),
                invoke("virtual", CONTEXT, "getSystemService", [STRING], OBJECT,
                       [1, 0]),
                ("move-result-object", 0),
                ("check-cast", 0, "Landroid/net/ConnectivityManager;"),
                invoke("virtual", "Landroid/net/ConnectivityManager;",
                       "getActiveNetworkInfo", [], "Landroid/net/NetworkInfo;", [0]),
                ("const/4", 0, 1),
                ("return", 0),
            ], registers=2, ins=1, outs=2),
        ]),
    ]


# --------------------------------------------------------------------------
# Documents


def manifest():
    return Element("manifest", [
        A("versionCode", "int", 3),
        A("versionName", "string", "1.2.0"),
        A("package", "string", PACKAGE_NAME, ns=None),
    ], [
        Element("uses-sdk", [A("minSdkVersion", "int", 21),
                             A("targetSdkVersion", "int", 33)]),
        Element("uses-permission", [A("name", "string",
                                      "android.permission.ACCESS_COARSE_LOCATION")]),
        Element("uses-permission", [A("name", "string",
                                      "android.permission.ACCESS_NETWORK_STATE")]),
        Element("application", [A("label", "ref", res_id("string", 0))], [
            Element("activity", [A("name", "string", "com.example.MainActivity")]),
            Element("activity", [A("name", "string",
                                   "com.applovin.impl.mediation.debugger.ui.b.a")]),
        ]),
    ])


def main_layout():
    return Element("LinearLayout", [
        A("layout_width", "int", -1),
        A("layout_height", "int", -1),
    ], [
        Element("Button", [
            A("id", "ref", res_id("id", 0x39)),
            A("onClick", "string", "onLocate"),
            A("background", "ref", res_id("drawable", 0)),
        ]),
    ])


def main_menu():
    return Element("menu", [], [
        Element("item", [
            A("id", "ref", res_id("id", 0x37)),
            A("title", "string", "Share"),
        ]),
    ])


# 1x1 transparent PNG.
PIN_PNG = bytes.fromhex(
    "89504e470d0a1a0a0000000d4948445200000001000000010806000000"
    "1f15c4890000000d49444154789c6360000002000154a24f5d00000000"
    "49454e44ae426082")

FIXED_TIME = (2024, 4, 16, 12, 0, 0)


def write_zip(path, members):
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as zf:
        for name, data, compress in members:
            info = zipfile.ZipInfo(name, FIXED_TIME)
            info.compress_type = zipfile.ZIP_DEFLATED if compress else zipfile.ZIP_STORED
            info.external_attr = 0o644 << 16
            info.create_system = 3
            zf.writestr(info, data)
    with open(path, "wb") as f:
        f.write(buf.getvalue())


def write(path, data):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "wb") as f:
        f.write(data)


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "tests", "fixtures")
    out = os.path.abspath(out)

    manifest_bytes = encode_axml(manifest(), utf8=False)
    layout_bytes = encode_axml(main_layout(), utf8=True)
    menu_bytes = encode_axml(main_menu(), utf8=True)
    arsc_bytes = encode_arsc()
    dex_bytes = DexBuilder(app_classes() + applovin_classes() +
                           javax_inject_classes()).build()

    bin_dir = os.path.join(out, "bin")
    write(os.path.join(bin_dir, "AndroidManifest.xml"), manifest_bytes)
    write(os.path.join(bin_dir, "main.xml"), layout_bytes)
    write(os.path.join(bin_dir, "main_menu.xml"), menu_bytes)
    write(os.path.join(bin_dir, "resources.arsc"), arsc_bytes)
    write(os.path.join(bin_dir, "classes.dex"), dex_bytes)

    write_zip(os.path.join(out, "fixture.apk"), [
        ("AndroidManifest.xml", manifest_bytes, True),
        ("classes.dex", dex_bytes, True),
        ("res/drawable/pin.png", PIN_PNG, False),
        ("res/layout/main.xml", layout_bytes, True),
        ("res/menu/main_menu.xml", menu_bytes, True),
        ("resources.arsc", arsc_bytes, False),
    ])
    write_zip(os.path.join(out, "no_dex.apk"), [
        ("AndroidManifest.xml", manifest_bytes, True),
        ("resources.arsc", arsc_bytes, False),
    ])

    lib_dir = os.path.join(out, "libs")
    write(os.path.join(lib_dir, "javax.inject-1.dex"),
          DexBuilder(javax_inject_classes()).build())
    write(os.path.join(lib_dir, "applovin-fixture.dex"),
          DexBuilder(applovin_classes()).build())


if __name__ == "__main__":
    main()
