#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snmpcep/errors.hpp"

namespace snmpcep {

// Minimal BER subset for SNMP v2c GET/GETNEXT over UDP.

struct Oid {
  std::vector<std::uint32_t> ids;

  static Oid parse(const std::string& dotted) {
    Oid o;
    std::size_t pos = 0;
    while (pos <= dotted.size()) {
      std::size_t dot = dotted.find('.', pos);
      std::string part = dotted.substr(pos, (dot == std::string::npos ? dotted.size() : dot) - pos);
      if (part.empty()) throw ValueError("bad OID: " + dotted);
      o.ids.push_back(static_cast<std::uint32_t>(std::stoul(part)));
      if (dot == std::string::npos) break;
      pos = dot + 1;
    }
    if (o.ids.size() < 2) throw ValueError("OID too short: " + dotted);
    return o;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) s += '.';
      s += std::to_string(ids[i]);
    }
    return s;
  }

  bool starts_with(const Oid& prefix) const {
    if (ids.size() < prefix.ids.size()) return false;
    for (std::size_t i = 0; i < prefix.ids.size(); ++i)
      if (ids[i] != prefix.ids[i]) return false;
    return true;
  }

  Oid with_suffix(std::uint32_t sub) const {
    Oid o = *this;
    o.ids.push_back(sub);
    return o;
  }

  friend bool operator==(const Oid&, const Oid&) = default;
  friend auto operator<=>(const Oid& a, const Oid& b) { return a.ids <=> b.ids; }
};

namespace ber {

using Bytes = std::vector<std::uint8_t>;

constexpr std::uint8_t kInteger = 0x02;
constexpr std::uint8_t kOctetString = 0x04;
constexpr std::uint8_t kNull = 0x05;
constexpr std::uint8_t kOidTag = 0x06;
constexpr std::uint8_t kSequence = 0x30;
constexpr std::uint8_t kIpAddress = 0x40;
constexpr std::uint8_t kCounter32 = 0x41;
constexpr std::uint8_t kGauge32 = 0x42;
constexpr std::uint8_t kTimeTicks = 0x43;
constexpr std::uint8_t kCounter64 = 0x46;
constexpr std::uint8_t kNoSuchObject = 0x80;
constexpr std::uint8_t kNoSuchInstance = 0x81;
constexpr std::uint8_t kEndOfMibView = 0x82;
constexpr std::uint8_t kGetRequest = 0xA0;
constexpr std::uint8_t kGetNextRequest = 0xA1;
constexpr std::uint8_t kGetResponse = 0xA2;

inline void append(Bytes& out, const Bytes& b) { out.insert(out.end(), b.begin(), b.end()); }

inline Bytes length(std::size_t n) {
  if (n < 0x80) return {static_cast<std::uint8_t>(n)};
  Bytes digits;
  while (n > 0) {
    digits.insert(digits.begin(), static_cast<std::uint8_t>(n & 0xFF));
    n >>= 8;
  }
  Bytes out{static_cast<std::uint8_t>(0x80 | digits.size())};
  append(out, digits);
  return out;
}

inline Bytes tlv(std::uint8_t tag, const Bytes& content) {
  Bytes out{tag};
  append(out, length(content.size()));
  append(out, content);
  return out;
}

// Two's-complement minimal-length INTEGER.
inline Bytes encode_int(std::int64_t v, std::uint8_t tag = kInteger) {
  Bytes content;
  bool more = true;
  while (more) {
    content.insert(content.begin(), static_cast<std::uint8_t>(v & 0xFF));
    std::int64_t rest = v >> 8;
    std::uint8_t top = content.front();
    more = !((rest == 0 && !(top & 0x80)) || (rest == -1 && (top & 0x80)));
    v = rest;
  }
  return tlv(tag, content);
}

// Unsigned application types (Counter32, Gauge32, TimeTicks, Counter64).
inline Bytes encode_uint(std::uint64_t v, std::uint8_t tag) {
  Bytes content;
  do {
    content.insert(content.begin(), static_cast<std::uint8_t>(v & 0xFF));
    v >>= 8;
  } while (v > 0);
  if (content.front() & 0x80) content.insert(content.begin(), 0x00);
  return tlv(tag, content);
}

inline Bytes encode_octets(const std::string& s, std::uint8_t tag = kOctetString) {
  return tlv(tag, Bytes(s.begin(), s.end()));
}

inline Bytes encode_null(std::uint8_t tag = kNull) { return tlv(tag, {}); }

inline Bytes encode_oid(const Oid& oid) {
  Bytes content;
  if (oid.ids.size() < 2) throw SnmpError("OID too short to encode");
  content.push_back(static_cast<std::uint8_t>(oid.ids[0] * 40 + oid.ids[1]));
  for (std::size_t i = 2; i < oid.ids.size(); ++i) {
    std::uint32_t v = oid.ids[i];
    Bytes group;
    group.push_back(static_cast<std::uint8_t>(v & 0x7F));
    v >>= 7;
    while (v > 0) {
      group.insert(group.begin(), static_cast<std::uint8_t>(0x80 | (v & 0x7F)));
      v >>= 7;
    }
    append(content, group);
  }
  return tlv(kOidTag, content);
}

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t size) : p_(data), end_(data + size) {}

  bool done() const { return p_ >= end_; }

  std::uint8_t peek_tag() const {
    if (done()) throw SnmpError("truncated BER data");
    return *p_;
  }

  // Reads a TLV header; returns the tag and constrains a sub-reader to the value.
  std::pair<std::uint8_t, Reader> open() {
    std::uint8_t tag = read_byte();
    std::size_t len = read_length();
    if (static_cast<std::size_t>(end_ - p_) < len) throw SnmpError("BER length overruns buffer");
    Reader sub(p_, len);
    p_ += len;
    return {tag, sub};
  }

  std::int64_t read_int_content() {
    if (done()) return 0;
    std::int64_t v = (*p_ & 0x80) ? -1 : 0;
    while (!done()) v = (v << 8) | read_byte();
    return v;
  }

  std::uint64_t read_uint_content() {
    std::uint64_t v = 0;
    while (!done()) v = (v << 8) | read_byte();
    return v;
  }

  std::string read_string_content() {
    std::string s(reinterpret_cast<const char*>(p_), static_cast<std::size_t>(end_ - p_));
    p_ = end_;
    return s;
  }

  Oid read_oid_content() {
    Oid o;
    if (done()) throw SnmpError("empty OID");
    std::uint8_t first = read_byte();
    o.ids.push_back(first / 40);
    o.ids.push_back(first % 40);
    std::uint32_t acc = 0;
    while (!done()) {
      std::uint8_t b = read_byte();
      acc = (acc << 7) | (b & 0x7F);
      if (!(b & 0x80)) {
        o.ids.push_back(acc);
        acc = 0;
      }
    }
    return o;
  }

 private:
  const std::uint8_t* p_;
  const std::uint8_t* end_;

  std::uint8_t read_byte() {
    if (done()) throw SnmpError("truncated BER data");
    return *p_++;
  }

  std::size_t read_length() {
    std::uint8_t b = read_byte();
    if (!(b & 0x80)) return b;
    std::size_t n_octets = b & 0x7F;
    if (n_octets == 0 || n_octets > 4) throw SnmpError("unsupported BER length form");
    std::size_t len = 0;
    for (std::size_t i = 0; i < n_octets; ++i) len = (len << 8) | read_byte();
    return len;
  }
};

}  // namespace ber

struct SnmpValue {
  enum class Type {
    Integer,
    Counter32,
    Gauge32,
    TimeTicks,
    Counter64,
    OctetString,
    OidValue,
    Null,
    NoSuchObject,
    NoSuchInstance,
    EndOfMibView,
    Other,
  };
  Type type = Type::Null;
  std::int64_t int_val = 0;
  std::string str;
  Oid oid;

  bool is_numeric() const {
    return type == Type::Integer || type == Type::Counter32 || type == Type::Gauge32 ||
           type == Type::TimeTicks || type == Type::Counter64;
  }
};

struct VarBind {
  Oid oid;
  SnmpValue value;
};

struct SnmpPdu {
  std::uint8_t type = ber::kGetRequest;
  std::int32_t request_id = 0;
  int error_status = 0;
  int error_index = 0;
  std::vector<VarBind> varbinds;
};

struct SnmpMessage {
  int version = 1;  // v2c
  std::string community;
  SnmpPdu pdu;
};

namespace ber {

inline Bytes encode_value(const SnmpValue& v) {
  switch (v.type) {
    case SnmpValue::Type::Integer: return encode_int(v.int_val);
    case SnmpValue::Type::Counter32: return encode_uint(static_cast<std::uint64_t>(v.int_val), kCounter32);
    case SnmpValue::Type::Gauge32: return encode_uint(static_cast<std::uint64_t>(v.int_val), kGauge32);
    case SnmpValue::Type::TimeTicks: return encode_uint(static_cast<std::uint64_t>(v.int_val), kTimeTicks);
    case SnmpValue::Type::Counter64: return encode_uint(static_cast<std::uint64_t>(v.int_val), kCounter64);
    case SnmpValue::Type::OctetString: return encode_octets(v.str);
    case SnmpValue::Type::OidValue: return encode_oid(v.oid);
    case SnmpValue::Type::Null: return encode_null();
    case SnmpValue::Type::NoSuchObject: return encode_null(kNoSuchObject);
    case SnmpValue::Type::NoSuchInstance: return encode_null(kNoSuchInstance);
    case SnmpValue::Type::EndOfMibView: return encode_null(kEndOfMibView);
    case SnmpValue::Type::Other: return encode_null();
  }
  return encode_null();
}

inline SnmpValue decode_value(std::uint8_t tag, Reader& content) {
  SnmpValue v;
  switch (tag) {
    case kInteger:
      v.type = SnmpValue::Type::Integer;
      v.int_val = content.read_int_content();
      break;
    case kCounter32:
      v.type = SnmpValue::Type::Counter32;
      v.int_val = static_cast<std::int64_t>(content.read_uint_content());
      break;
    case kGauge32:
      v.type = SnmpValue::Type::Gauge32;
      v.int_val = static_cast<std::int64_t>(content.read_uint_content());
      break;
    case kTimeTicks:
      v.type = SnmpValue::Type::TimeTicks;
      v.int_val = static_cast<std::int64_t>(content.read_uint_content());
      break;
    case kCounter64:
      v.type = SnmpValue::Type::Counter64;
      v.int_val = static_cast<std::int64_t>(content.read_uint_content());
      break;
    case kOctetString:
      v.type = SnmpValue::Type::OctetString;
      v.str = content.read_string_content();
      break;
    case kOidTag:
      v.type = SnmpValue::Type::OidValue;
      v.oid = content.read_oid_content();
      break;
    case kNull: v.type = SnmpValue::Type::Null; break;
    case kNoSuchObject: v.type = SnmpValue::Type::NoSuchObject; break;
    case kNoSuchInstance: v.type = SnmpValue::Type::NoSuchInstance; break;
    case kEndOfMibView: v.type = SnmpValue::Type::EndOfMibView; break;
    default: v.type = SnmpValue::Type::Other; break;
  }
  return v;
}

inline Bytes encode_message(const SnmpMessage& msg) {
  Bytes varbinds;
  for (const auto& vb : msg.pdu.varbinds) {
    Bytes one = encode_oid(vb.oid);
    append(one, encode_value(vb.value));
    append(varbinds, tlv(kSequence, one));
  }
  Bytes pdu = encode_int(msg.pdu.request_id);
  append(pdu, encode_int(msg.pdu.error_status));
  append(pdu, encode_int(msg.pdu.error_index));
  append(pdu, tlv(kSequence, varbinds));
  Bytes body = encode_int(msg.version);
  append(body, encode_octets(msg.community));
  append(body, tlv(msg.pdu.type, pdu));
  return tlv(kSequence, body);
}

inline SnmpMessage decode_message(const std::uint8_t* data, std::size_t size) {
  Reader top(data, size);
  auto [otag, outer] = top.open();
  if (otag != kSequence) throw SnmpError("SNMP message is not a SEQUENCE");
  SnmpMessage msg;
  {
    auto [tag, content] = outer.open();
    if (tag != kInteger) throw SnmpError("bad SNMP version field");
    msg.version = static_cast<int>(content.read_int_content());
  }
  {
    auto [tag, content] = outer.open();
    if (tag != kOctetString) throw SnmpError("bad community field");
    msg.community = content.read_string_content();
  }
  {
    auto [tag, pdu] = outer.open();
    if (tag != kGetRequest && tag != kGetNextRequest && tag != kGetResponse)
      throw SnmpError("unsupported PDU type");
    msg.pdu.type = tag;
    {
      auto [t, c] = pdu.open();
      if (t != kInteger) throw SnmpError("bad request-id");
      msg.pdu.request_id = static_cast<std::int32_t>(c.read_int_content());
    }
    {
      auto [t, c] = pdu.open();
      msg.pdu.error_status = static_cast<int>(c.read_int_content());
    }
    {
      auto [t, c] = pdu.open();
      msg.pdu.error_index = static_cast<int>(c.read_int_content());
    }
    auto [vt, vbl] = pdu.open();
    if (vt != kSequence) throw SnmpError("bad varbind list");
    while (!vbl.done()) {
      auto [bt, vb] = vbl.open();
      if (bt != kSequence) throw SnmpError("bad varbind");
      auto [ot, oc] = vb.open();
      if (ot != kOidTag) throw SnmpError("varbind without OID");
      VarBind bind;
      bind.oid = oc.read_oid_content();
      auto [val_tag, val] = vb.open();
      bind.value = decode_value(val_tag, val);
      msg.pdu.varbinds.push_back(std::move(bind));
    }
  }
  return msg;
}

}  // namespace ber
}  // namespace snmpcep
