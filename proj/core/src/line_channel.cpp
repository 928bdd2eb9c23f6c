#include "reline/line_channel.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace reline::adapter {

FdChannel::FdChannel(int fd) : fd_(fd) {}

FdChannel::~FdChannel() {
    if (fd_ >= 0) ::close(fd_);
}

bool FdChannel::read_line(std::string& out, int timeout_ms) {
    while (true) {
        size_t nl = buf_.find('\n');
        if (nl != std::string::npos) {
            out = buf_.substr(0, nl);
            buf_.erase(0, nl + 1);
            return true;
        }
        pollfd pfd{fd_, POLLIN, 0};
        int rc = ::poll(&pfd, 1, timeout_ms);
        if (rc == 0) throw ChannelTimeout("channel: read timed out");
        if (rc < 0) {
            if (errno == EINTR) continue;
            throw std::runtime_error(std::string("channel: poll failed: ") + std::strerror(errno));
        }
        char chunk[4096];
        ssize_t n = ::read(fd_, chunk, sizeof(chunk));
        if (n == 0) {
            if (!buf_.empty()) {
                out = std::move(buf_);
                buf_.clear();
                return true;
            }
            return false;
        }
        if (n < 0) {
            if (errno == EINTR) continue;
            throw std::runtime_error(std::string("channel: read failed: ") + std::strerror(errno));
        }
        buf_.append(chunk, static_cast<size_t>(n));
    }
}

void FdChannel::write_line(const std::string& line) {
    std::string msg = line;
    msg.push_back('\n');
    size_t off = 0;
    while (off < msg.size()) {
        ssize_t n = ::write(fd_, msg.data() + off, msg.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw std::runtime_error(std::string("channel: write failed: ") + std::strerror(errno));
        }
        off += static_cast<size_t>(n);
    }
}

std::pair<std::unique_ptr<FdChannel>, std::unique_ptr<FdChannel>> make_channel_pair() {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0)
        throw std::runtime_error(std::string("channel: socketpair failed: ") + std::strerror(errno));
    return {std::make_unique<FdChannel>(fds[0]), std::make_unique<FdChannel>(fds[1])};
}

std::unique_ptr<FdChannel> connect_tcp(const std::string& host, int port, int timeout_ms) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw std::runtime_error("channel: socket failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw std::runtime_error("channel: bad host address " + host);
    }
    (void)timeout_ms;
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd);
        throw std::runtime_error(std::string("channel: connect failed: ") + std::strerror(errno));
    }
    return std::make_unique<FdChannel>(fd);
}

TcpListener::TcpListener(int port) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw std::runtime_error("channel: socket failed");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<uint16_t>(port));
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(listen_fd_);
        throw std::runtime_error(std::string("channel: bind failed: ") + std::strerror(errno));
    }
    if (::listen(listen_fd_, 1) != 0) {
        ::close(listen_fd_);
        throw std::runtime_error("channel: listen failed");
    }
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

std::unique_ptr<FdChannel> TcpListener::accept_one() {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) throw std::runtime_error(std::string("channel: accept failed: ") + std::strerror(errno));
    return std::make_unique<FdChannel>(fd);
}

}  // namespace reline::adapter
