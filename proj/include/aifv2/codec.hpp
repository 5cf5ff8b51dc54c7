#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aifv2/codetree.hpp"
#include "aifv2/distribution.hpp"
#include "aifv2/errors.hpp"

namespace aifv2 {

// A bit sequence, most-significant bit of each byte first; the final byte is
// zero-padded.
struct BitStream {
  std::vector<std::uint8_t> bytes;
  std::uint64_t bit_len = 0;

  void push_bit(int b) {
    const std::size_t byte = bit_len / 8;
    if (byte == bytes.size()) bytes.push_back(0);
    if (b) bytes[byte] |= static_cast<std::uint8_t>(0x80u >> (bit_len % 8));
    ++bit_len;
  }
  void push_bits(const std::string& bits) {
    for (char c : bits) push_bit(c == '1');
  }
  int bit(std::uint64_t idx) const {
    return (bytes[idx / 8] >> (7 - idx % 8)) & 1;
  }
};

// Encoding tables for one side of a pair: codeword and node kind per symbol.
struct EncoderSide {
  std::vector<std::string> codewords;
  std::vector<bool> is_master;
};

struct EncoderTables {
  EncoderSide side0;
  EncoderSide side1;

  template <class V>
  static EncoderTables from_pair(const CodeFunctionals<V>& f0,
                                 const CodeFunctionals<V>& f1) {
    return EncoderTables{{f0.codewords, f0.symbol_is_master},
                         {f1.codewords, f1.symbol_is_master}};
  }
};

// Encodes a symbol sequence (0-based sorted indices).  The encoder is a
// two-state machine: state 0 emits from the side-0 tree, state 1 from the
// side-1 tree; emitting from a leaf moves to state 0, from a master to
// state 1.
inline BitStream encode(const EncoderTables& tables, const std::vector<int>& symbols) {
  BitStream out;
  int state = 0;
  const int n0 = static_cast<int>(tables.side0.codewords.size());
  const int n1 = static_cast<int>(tables.side1.codewords.size());
  for (int s : symbols) {
    const EncoderSide& side = state == 0 ? tables.side0 : tables.side1;
    if (s < 0 || s >= (state == 0 ? n0 : n1))
      throw InputError("encode: symbol index out of range");
    out.push_bits(side.codewords[s]);
    state = side.is_master[s] ? 1 : 0;
  }
  return out;
}

struct DecodeStats {
  // Largest number of bits inspected beyond the decoder's committed
  // position, i.e. the peek window at masters.  Never exceeds 2.
  int max_lookahead = 0;
};

// Decodes exactly `count` symbols by walking the pair's trees.  At a master
// the decoder peeks two bits: "00" continues (consuming both) to the
// master's grandchild inside the same codeword; anything else - including
// fewer than two bits remaining - emits the master's symbol and switches to
// the side-1 tree.  Reaching a leaf emits and switches to the side-0 tree.
// The stream must be consumed exactly.
inline std::vector<int> decode(const CodeTree& t0, const CodeTree& t1,
                               const BitStream& in, std::uint64_t count,
                               DecodeStats* stats = nullptr) {
  if (!t0.complete() || !t1.complete())
    throw InputError("decode: trees are not finished");
  std::vector<int> out;
  out.reserve(count);
  std::uint64_t pos = 0;
  int state = 0;
  DecodeStats local;
  while (out.size() < count) {
    const TreeNode* node = (state == 0 ? t0 : t1).root();
    for (;;) {
      if (node->kind == NodeKind::leaf) {
        out.push_back(node->symbol);
        state = 0;
        break;
      }
      if (node->kind == NodeKind::master) {
        // Peek up to two bits past the committed position.
        if (pos + 2 <= in.bit_len && in.bit(pos) == 0 && in.bit(pos + 1) == 0) {
          local.max_lookahead = 2;
          pos += 2;
          const TreeNode* slave = node->zero.get();
          if (!slave || !(node = slave->child(0)))
            throw InternalError("decode: master without a grandchild");
          continue;
        }
        if (pos + 2 <= in.bit_len && local.max_lookahead < 2)
          local.max_lookahead = 2;
        out.push_back(node->symbol);
        state = 1;
        break;
      }
      // internal or pass-through: consume one bit and descend.
      if (pos >= in.bit_len)
        throw CorruptStreamError("decode: stream ended inside a codeword");
      int b = in.bit(pos++);
      const TreeNode* next = node->child(b);
      if (!next)
        throw CorruptStreamError("decode: no branch for input bit");
      node = next;
    }
  }
  if (pos != in.bit_len)
    throw CorruptStreamError("decode: trailing bits after the last symbol");
  if (stats) *stats = local;
  return out;
}

// ---------------------------------------------------------------------------
// Container: "AIFV2", version byte 0x01, alphabet size (u32 BE), symbol
// count (u64 BE), bit length (u64 BE), zero-padded payload bytes.

inline constexpr char kContainerMagic[5] = {'A', 'I', 'F', 'V', '2'};
inline constexpr std::uint8_t kContainerVersion = 0x01;

inline std::vector<std::uint8_t> write_container(std::uint32_t alphabet_size,
                                                 std::uint64_t symbol_count,
                                                 const BitStream& stream) {
  std::vector<std::uint8_t> out;
  out.reserve(5 + 1 + 4 + 8 + 8 + stream.bytes.size());
  for (char c : kContainerMagic) out.push_back(static_cast<std::uint8_t>(c));
  out.push_back(kContainerVersion);
  for (int i = 3; i >= 0; --i)
    out.push_back(static_cast<std::uint8_t>(alphabet_size >> (8 * i)));
  for (int i = 7; i >= 0; --i)
    out.push_back(static_cast<std::uint8_t>(symbol_count >> (8 * i)));
  for (int i = 7; i >= 0; --i)
    out.push_back(static_cast<std::uint8_t>(stream.bit_len >> (8 * i)));
  out.insert(out.end(), stream.bytes.begin(), stream.bytes.end());
  return out;
}

struct Container {
  std::uint32_t alphabet_size = 0;
  std::uint64_t symbol_count = 0;
  BitStream stream;
};

inline Container read_container(const std::vector<std::uint8_t>& data) {
  if (data.size() < 26) throw CorruptStreamError("container: truncated header");
  for (int i = 0; i < 5; ++i)
    if (data[i] != static_cast<std::uint8_t>(kContainerMagic[i]))
      throw CorruptStreamError("container: bad magic");
  if (data[5] != kContainerVersion)
    throw CorruptStreamError("container: unsupported version");
  Container c;
  for (int i = 0; i < 4; ++i) c.alphabet_size = (c.alphabet_size << 8) | data[6 + i];
  for (int i = 0; i < 8; ++i) c.symbol_count = (c.symbol_count << 8) | data[10 + i];
  std::uint64_t bit_len = 0;
  for (int i = 0; i < 8; ++i) bit_len = (bit_len << 8) | data[18 + i];
  const std::uint64_t payload = (bit_len + 7) / 8;
  if (data.size() != 26 + payload)
    throw CorruptStreamError("container: payload size mismatch");
  c.stream.bit_len = bit_len;
  c.stream.bytes.assign(data.begin() + 26, data.end());
  if (bit_len % 8 != 0 && !c.stream.bytes.empty()) {
    const std::uint8_t mask = static_cast<std::uint8_t>(0xffu >> (bit_len % 8));
    if (c.stream.bytes.back() & mask)
      throw CorruptStreamError("container: nonzero padding bits");
  }
  return c;
}

}  // namespace aifv2
