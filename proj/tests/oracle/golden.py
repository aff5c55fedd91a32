#!/usr/bin/env python3
"""Independent oracle for the conformance vectors in tests/data/golden_vectors.txt.

Builds payloads byte by byte from the encoding rules and hashes them with
hashlib. Output: one `tag hex(payload) hex(digest)` record per line.
"""
import hashlib
import struct


def u8(v):
    return struct.pack("<B", v)


def u32(v):
    return struct.pack("<I", v)


def u64(v):
    return struct.pack("<Q", v)


def octets(b):
    return u32(len(b)) + b


def h(tag, payload):
    t = tag.encode()
    return hashlib.sha256(u32(len(t)) + t + payload).digest()


def bundle(entries):
    out = u8(0x01) + u32(len(entries))
    for label, value in entries:
        out += octets(label.encode()) + octets(value)
    return out


def ident_input(domain, sender, seq):
    return u8(0x02) + u32(domain) + octets(sender) + u64(seq)


def vk_entry(kind, relation, key):
    return u8(0x0C) + u8(kind) + u32(relation) + octets(key)


def nullifier_input(identifier, secret):
    return u8(0x0F) + identifier + octets(secret)


ZERO = bytes(32)
records = []


def add(tag, payload):
    records.append((tag, payload, h(tag, payload)))
    return records[-1][2]


add("commit", b"")
for tag in ("ident", "commit", "nullifier", "attest", "vkid", "root"):
    add(tag, b"abc")
add("commit", ZERO + bundle([]))
add("commit", bytes(range(32)) + bundle([("amount", u64(1000)), ("to", b"bob")]))
alice0 = add("ident", ident_input(1, b"alice", 0))
add("ident", ident_input(1, b"alice", 1))
add("ident", ident_input(2, b"alice", 0))
add("nullifier", nullifier_input(alice0, bytes(range(16))))
add("vkid", vk_entry(2, 1, b""))
add("vkid", vk_entry(1, 2, bytes([7]) * 32))

node = ZERO
for _ in range(8):
    node = add("root", node + node)

for tag, payload, digest in records:
    print(tag, payload.hex() if payload else "-", digest.hex())
