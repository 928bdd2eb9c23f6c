// Reference game server: a scripted 1-D corridor speaking the line protocol
// over TCP. Useful as an adapter test peer and a wire-protocol example.
#include <iostream>

#include <CLI11.hpp>

#include "reline/line_channel.hpp"
#include "reline/ref_server.hpp"

int main(int argc, char** argv) {
    CLI::App app{"reference corridor game server"};
    int port = 0;
    double inject_load = 0.0;
    int corridor_length = 20;
    int max_episode_steps = 60;
    bool once = false;
    app.add_option("--port", port, "TCP port (0 picks an ephemeral port)");
    app.add_option("--inject-load", inject_load, "extra milliseconds added to every reported timing");
    app.add_option("--corridor-length", corridor_length, "corridor cells");
    app.add_option("--max-episode-steps", max_episode_steps, "step cap per episode");
    app.add_flag("--once", once, "serve a single client, then exit");
    CLI11_PARSE(app, argc, argv);

    try {
        reline::adapter::TcpListener listener(port);
        std::cout << "listening on 127.0.0.1:" << listener.port() << std::endl;

        reline::adapter::RefServerConfig cfg;
        cfg.corridor_length = corridor_length;
        cfg.max_episode_steps = max_episode_steps;
        cfg.injected_load_ms = inject_load;
        do {
            auto channel = listener.accept_one();
            reline::adapter::RefServer server(cfg);
            server.serve(*channel);
        } while (!once);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
