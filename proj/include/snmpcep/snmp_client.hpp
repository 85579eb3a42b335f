#pragma once

#include <arpa/inet.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <cstring>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "snmpcep/errors.hpp"
#include "snmpcep/snmp_ber.hpp"

namespace snmpcep {

struct SnmpClientConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 161;
  std::string community = "public";
  int timeout_ms = 2000;
  int retries = 2;
};

namespace detail {

class UdpSocket {
 public:
  UdpSocket(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_DGRAM;
    addrinfo* res = nullptr;
    int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res);
    if (rc != 0) throw SnmpError("cannot resolve " + host + ": " + gai_strerror(rc));
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
      fd_ = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd_ < 0) continue;
      if (::connect(fd_, ai->ai_addr, ai->ai_addrlen) == 0) break;
      ::close(fd_);
      fd_ = -1;
    }
    ::freeaddrinfo(res);
    if (fd_ < 0) throw SnmpError("cannot open UDP socket to " + host);
  }

  ~UdpSocket() {
    if (fd_ >= 0) ::close(fd_);
  }

  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;

  void send(const std::vector<std::uint8_t>& data) {
    if (::send(fd_, data.data(), data.size(), 0) < 0)
      throw SnmpError("UDP send failed: " + std::string(std::strerror(errno)));
  }

  // Receives one datagram within timeout_ms; nullopt on timeout.
  std::optional<std::vector<std::uint8_t>> recv(int timeout_ms) {
    pollfd pfd{fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, timeout_ms);
    if (rc == 0) return std::nullopt;
    if (rc < 0) throw SnmpError("poll failed: " + std::string(std::strerror(errno)));
    std::vector<std::uint8_t> buf(65536);
    ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
    if (n < 0) throw SnmpError("UDP recv failed: " + std::string(std::strerror(errno)));
    buf.resize(static_cast<std::size_t>(n));
    return buf;
  }

 private:
  int fd_ = -1;
};

}  // namespace detail

// SNMP v2c GET/GETNEXT client. Requests time out after timeout_ms and are
// retried; community mismatches surface as timeouts (agents drop them).
class SnmpClient {
 public:
  explicit SnmpClient(SnmpClientConfig config)
      : config_(std::move(config)), sock_(config_.host, config_.port) {
    std::random_device rd;
    request_id_ = static_cast<std::int32_t>(rd() & 0x3FFFFFFF);
  }

  const SnmpClientConfig& config() const { return config_; }

  std::vector<VarBind> get(const std::vector<Oid>& oids) {
    return transact(ber::kGetRequest, oids).pdu.varbinds;
  }

  std::optional<VarBind> get_next(const Oid& oid) {
    auto msg = transact(ber::kGetNextRequest, {oid});
    if (msg.pdu.varbinds.empty()) return std::nullopt;
    const VarBind& vb = msg.pdu.varbinds.front();
    if (vb.value.type == SnmpValue::Type::EndOfMibView) return std::nullopt;
    return vb;
  }

  // GETNEXT walk over one subtree.
  std::vector<VarBind> walk(const Oid& subtree, std::size_t max_rows = 1024) {
    std::vector<VarBind> out;
    Oid cur = subtree;
    while (out.size() < max_rows) {
      auto vb = get_next(cur);
      if (!vb || !vb->oid.starts_with(subtree)) break;
      if (vb->oid == cur) break;  // agent not advancing
      cur = vb->oid;
      out.push_back(std::move(*vb));
    }
    return out;
  }

 private:
  SnmpClientConfig config_;
  detail::UdpSocket sock_;
  std::int32_t request_id_ = 0;

  SnmpMessage transact(std::uint8_t pdu_type, const std::vector<Oid>& oids) {
    SnmpMessage req;
    req.version = 1;
    req.community = config_.community;
    req.pdu.type = pdu_type;
    req.pdu.request_id = ++request_id_;
    for (const auto& oid : oids) req.pdu.varbinds.push_back({oid, SnmpValue{}});
    auto encoded = ber::encode_message(req);

    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
      sock_.send(encoded);
      auto deadline = std::chrono::steady_clock::now() +
                      std::chrono::milliseconds(config_.timeout_ms);
      while (true) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                        deadline - std::chrono::steady_clock::now())
                        .count();
        if (left <= 0) break;
        auto data = sock_.recv(static_cast<int>(left));
        if (!data) break;
        SnmpMessage resp;
        try {
          resp = ber::decode_message(data->data(), data->size());
        } catch (const SnmpError&) {
          continue;  // garbage datagram, keep waiting
        }
        if (resp.pdu.type != ber::kGetResponse ||
            resp.pdu.request_id != req.pdu.request_id ||
            resp.community != config_.community)
          continue;  // not ours
        if (resp.pdu.error_status != 0)
          throw SnmpError("agent returned error-status " +
                          std::to_string(resp.pdu.error_status) + " at index " +
                          std::to_string(resp.pdu.error_index));
        return resp;
      }
    }
    throw SnmpTimeout("no response from " + config_.host + ":" +
                      std::to_string(config_.port) + " after " +
                      std::to_string(config_.retries + 1) + " attempts");
  }
};

}  // namespace snmpcep
