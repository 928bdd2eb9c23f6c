#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace reline::adapter {

struct ChannelTimeout : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Newline-delimited text messages over a file descriptor (socketpair in
// tests, TCP for external game processes).
class LineChannel {
public:
    virtual ~LineChannel() = default;
    // false on orderly EOF; throws ChannelTimeout when the deadline passes.
    virtual bool read_line(std::string& out, int timeout_ms) = 0;
    virtual void write_line(const std::string& line) = 0;
};

class FdChannel final : public LineChannel {
public:
    explicit FdChannel(int fd);
    ~FdChannel() override;
    FdChannel(const FdChannel&) = delete;
    FdChannel& operator=(const FdChannel&) = delete;

    bool read_line(std::string& out, int timeout_ms) override;
    void write_line(const std::string& line) override;

private:
    int fd_;
    std::string buf_;
};

// Connected bidirectional in-process pair (socketpair).
std::pair<std::unique_ptr<FdChannel>, std::unique_ptr<FdChannel>> make_channel_pair();

std::unique_ptr<FdChannel> connect_tcp(const std::string& host, int port, int timeout_ms);

class TcpListener {
public:
    explicit TcpListener(int port);  // 0 picks an ephemeral port
    ~TcpListener();
    int port() const { return port_; }
    std::unique_ptr<FdChannel> accept_one();

private:
    int listen_fd_;
    int port_;
};

}  // namespace reline::adapter
