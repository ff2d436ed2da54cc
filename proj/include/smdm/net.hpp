#pragma once

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <string>
#include <string_view>
#include <thread>

#include "smdm/error.hpp"

namespace smdm::net {

using Deadline = std::chrono::steady_clock::time_point;

inline int remaining_ms(Deadline deadline) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) return 0;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    return ms > 1000 ? 1000 : static_cast<int>(ms); // poll in ticks so shutdown is noticed
}

class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    Socket(Socket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    Socket& operator=(Socket&& other) noexcept {
        if (this != &other) {
            close_fd();
            fd_ = other.fd_;
            other.fd_ = -1;
        }
        return *this;
    }
    ~Socket() { close_fd(); }

    int fd() const { return fd_; }
    bool valid() const { return fd_ >= 0; }

    void close_fd() {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }

    // Unblocks any thread sleeping in a read or write on this socket.
    void shutdown_fd() {
        if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
    }

    void write_all(std::string_view bytes, Deadline deadline) const {
        const char* p = bytes.data();
        std::size_t left = bytes.size();
        while (left > 0) {
            ssize_t n = ::send(fd_, p, left, MSG_NOSIGNAL);
            if (n > 0) {
                p += n;
                left -= static_cast<std::size_t>(n);
                continue;
            }
            if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR)) {
                if (std::chrono::steady_clock::now() >= deadline)
                    fail(errc::timeout, "send stalled past the deadline");
                struct pollfd pfd{fd_, POLLOUT, 0};
                ::poll(&pfd, 1, remaining_ms(deadline));
                continue;
            }
            fail(errc::connection_lost, std::string("send: ") + std::strerror(errno));
        }
    }

    // Up to n bytes; 0 means orderly EOF. Throws Timeout past the deadline.
    std::size_t read_some(char* buf, std::size_t n, Deadline deadline) const {
        while (true) {
            struct pollfd pfd{fd_, POLLIN, 0};
            int pr = ::poll(&pfd, 1, remaining_ms(deadline));
            if (pr < 0) {
                if (errno == EINTR) continue;
                fail(errc::connection_lost, std::string("poll: ") + std::strerror(errno));
            }
            if (pr == 0) {
                if (std::chrono::steady_clock::now() >= deadline)
                    fail(errc::timeout, "no data within the deadline");
                continue;
            }
            ssize_t r = ::recv(fd_, buf, n, 0);
            if (r > 0) return static_cast<std::size_t>(r);
            if (r == 0) return 0;
            if (errno == EINTR || errno == EAGAIN || errno == EWOULDBLOCK) continue;
            fail(errc::connection_lost, std::string("recv: ") + std::strerror(errno));
        }
    }

    // Exactly n bytes. Returns false on clean EOF before the first byte;
    // EOF mid-read is a lost connection.
    bool read_exact(char* buf, std::size_t n, Deadline deadline) const {
        std::size_t got = 0;
        while (got < n) {
            std::size_t r = read_some(buf + got, n - got, deadline);
            if (r == 0) {
                if (got == 0) return false;
                fail(errc::connection_lost, "peer closed mid-frame");
            }
            got += r;
        }
        return true;
    }

private:
    int fd_ = -1;
};

inline void enable_nodelay(const Socket& s) {
    int one = 1;
    ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

struct Listener {
    Socket socket;
    std::uint16_t port = 0;
};

// Binds a loopback listener; port 0 picks a free one.
inline Listener listen_on(std::uint16_t port) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) fail(errc::io_failure, std::string("socket: ") + std::strerror(errno));
    Socket s(fd);
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(port);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0)
        fail(errc::io_failure, std::string("bind: ") + std::strerror(errno));
    if (::listen(fd, 32) < 0)
        fail(errc::io_failure, std::string("listen: ") + std::strerror(errno));
    socklen_t len = sizeof addr;
    if (::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) < 0)
        fail(errc::io_failure, std::string("getsockname: ") + std::strerror(errno));
    return {std::move(s), ntohs(addr.sin_port)};
}

inline Socket accept_one(const Socket& listener, Deadline deadline) {
    while (true) {
        struct pollfd pfd{listener.fd(), POLLIN, 0};
        int pr = ::poll(&pfd, 1, remaining_ms(deadline));
        if (pr < 0) {
            if (errno == EINTR) continue;
            fail(errc::io_failure, std::string("poll: ") + std::strerror(errno));
        }
        if (pr == 0) {
            if (std::chrono::steady_clock::now() >= deadline)
                fail(errc::timeout, "no incoming connection within the deadline");
            continue;
        }
        int fd = ::accept(listener.fd(), nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR || errno == EAGAIN || errno == EWOULDBLOCK) continue;
            fail(errc::io_failure, std::string("accept: ") + std::strerror(errno));
        }
        Socket s(fd);
        enable_nodelay(s);
        return s;
    }
}

// Dials host:port, retrying refused connections until the deadline — the
// peer may simply not be listening yet.
inline Socket dial(const std::string& host, std::uint16_t port, Deadline deadline) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    std::string port_str = std::to_string(port);
    int rc = ::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res);
    if (rc != 0)
        fail(errc::io_failure, "cannot resolve '" + host + "': " + gai_strerror(rc));
    sockaddr_storage addr{};
    socklen_t addr_len = res->ai_addrlen;
    std::memcpy(&addr, res->ai_addr, res->ai_addrlen);
    ::freeaddrinfo(res);

    while (true) {
        int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd < 0) fail(errc::io_failure, std::string("socket: ") + std::strerror(errno));
        Socket s(fd);
        if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), addr_len) == 0) {
            enable_nodelay(s);
            return s;
        }
        if (std::chrono::steady_clock::now() >= deadline)
            fail(errc::timeout, "cannot reach " + host + ":" + port_str);
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
}

} // namespace smdm::net
