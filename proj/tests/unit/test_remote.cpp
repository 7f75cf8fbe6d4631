// SPDX-License-Identifier: Apache-2.0
#include <httplib.h>

#include "gentool/core/json.hpp"
#include "gentool/error.hpp"
#include "gentool/provider/remote.hpp"

#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <thread>

using namespace gentool;
using namespace gentool::provider;
using core::Json;

namespace {

class LocalServer {
public:
    LocalServer() {
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~LocalServer() {
        server_.stop();
        thread_.join();
    }
    httplib::Server& server() { return server_; }
    [[nodiscard]] std::string url(const std::string& path) const {
        return "http://127.0.0.1:" + std::to_string(port_) + path;
    }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

RemoteConfig config_for(const std::string& url, std::vector<std::chrono::milliseconds>* sleeps) {
    RemoteConfig c;
    c.url = url;
    c.model_id = "test-model";
    c.api_key = "secret";
    c.timeout = std::chrono::seconds(5);
    c.retry.sleep = [sleeps](std::chrono::milliseconds d) { sleeps->push_back(d); };
    return c;
}

std::string chat_reply(const std::string& content, const std::string& finish = "stop") {
    return core::dump_line(Json{{"choices", Json::array({Json{{"message", Json{{"role", "assistant"}, {"content", content}}},
                                                              {"finish_reason", finish}}})}});
}

}  // namespace

TEST(Url, Split) {
    EXPECT_EQ(split_url("http://h:8080/v1/chat"), (std::pair<std::string, std::string>{"http://h:8080", "/v1/chat"}));
    EXPECT_EQ(split_url("https://h"), (std::pair<std::string, std::string>{"https://h", "/"}));
    EXPECT_THROW((void)split_url("ftp://h/x"), std::invalid_argument);
    EXPECT_THROW((void)split_url("h/x"), std::invalid_argument);
}

TEST(Remote, ApiKeyFromEnvironment) {
    ::setenv("GENTOOL_API_KEY", "k1", 1);
    EXPECT_EQ(api_key_from_environment(), "k1");
    ::setenv("GENTOOL_API_KEY", "", 1);
    EXPECT_FALSE(api_key_from_environment());
    ::unsetenv("GENTOOL_API_KEY");
    EXPECT_FALSE(api_key_from_environment());
}

TEST(Remote, ChatRequestShapeAndAuth) {
    LocalServer s;
    Json seen;
    std::string auth;
    s.server().Post("/v1/chat", [&](const httplib::Request& req, httplib::Response& res) {
        seen = Json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(chat_reply("hello"), "application/json");
    });
    std::vector<std::chrono::milliseconds> sleeps;
    RemoteGenerator g(config_for(s.url("/v1/chat"), &sleeps));
    GenerationRequest r;
    r.prompt = "Say hello";
    r.temperature = 0.0;
    r.max_tokens = 50;
    EXPECT_EQ(g.generate(r), "hello");
    EXPECT_EQ(auth, "Bearer secret");
    EXPECT_EQ(seen["messages"][0]["content"], "Say hello");
    EXPECT_EQ(seen["temperature"], 0.0);
    EXPECT_EQ(seen["max_tokens"], 50);
    EXPECT_EQ(g.http_requests(), 1u);
    EXPECT_TRUE(sleeps.empty());
}

TEST(Remote, RetriesServerErrorsWithBackoff) {
    LocalServer s;
    std::atomic<int> calls{0};
    s.server().Post("/chat", [&](const httplib::Request&, httplib::Response& res) {
        if (++calls < 3) {
            res.status = 503;
            return;
        }
        res.set_content(chat_reply("ok"), "application/json");
    });
    std::vector<std::chrono::milliseconds> sleeps;
    RemoteGenerator g(config_for(s.url("/chat"), &sleeps));
    GenerationRequest r;
    r.prompt = "x";
    EXPECT_EQ(g.generate(r), "ok");
    EXPECT_EQ(g.http_requests(), 3u);
    EXPECT_EQ(sleeps, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(1000),
                                                               std::chrono::milliseconds(2000)}));
}

TEST(Remote, GivesUpAfterThreeAttempts) {
    LocalServer s;
    s.server().Post("/chat", [&](const httplib::Request&, httplib::Response& res) { res.status = 500; });
    std::vector<std::chrono::milliseconds> sleeps;
    RemoteGenerator g(config_for(s.url("/chat"), &sleeps));
    GenerationRequest r;
    r.prompt = "x";
    EXPECT_THROW((void)g.generate(r), RemoteError);
    EXPECT_EQ(g.http_requests(), 3u);
}

TEST(Remote, ClientErrorsAreNotRetried) {
    LocalServer s;
    s.server().Post("/chat", [&](const httplib::Request&, httplib::Response& res) {
        res.status = 401;
        res.set_content("{\"error\": \"bad key\"}", "application/json");
    });
    std::vector<std::chrono::milliseconds> sleeps;
    RemoteGenerator g(config_for(s.url("/chat"), &sleeps));
    GenerationRequest r;
    r.prompt = "x";
    EXPECT_THROW((void)g.generate(r), RemoteError);
    EXPECT_EQ(g.http_requests(), 1u);
}

TEST(Remote, TransportFailureRetried) {
    // A port that was free a moment ago and has nothing listening now.
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    socklen_t len = sizeof addr;
    ASSERT_EQ(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr), 0);
    ASSERT_EQ(::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len), 0);
    ::close(fd);
    const int port = ntohs(addr.sin_port);
    std::vector<std::chrono::milliseconds> sleeps;
    RemoteGenerator g(config_for("http://127.0.0.1:" + std::to_string(port) + "/chat", &sleeps));
    GenerationRequest r;
    r.prompt = "x";
    EXPECT_THROW((void)g.generate(r), RemoteError);
    EXPECT_EQ(g.http_requests(), 3u);
    EXPECT_EQ(sleeps.size(), 2u);
}

TEST(Remote, TruncatedAndMalformedReplies) {
    LocalServer s;
    s.server().Post("/cut", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content(chat_reply("partial", "length"), "application/json");
    });
    s.server().Post("/junk", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content("not json", "text/plain");
    });
    std::vector<std::chrono::milliseconds> sleeps;
    GenerationRequest r;
    r.prompt = "x";
    RemoteGenerator cut(config_for(s.url("/cut"), &sleeps));
    EXPECT_THROW((void)cut.generate(r), TruncatedError);
    RemoteGenerator junk(config_for(s.url("/junk"), &sleeps));
    EXPECT_THROW((void)junk.generate(r), RemoteError);
}

TEST(Remote, Embeddings) {
    LocalServer s;
    Json seen;
    s.server().Post("/emb", [&](const httplib::Request& req, httplib::Response& res) {
        seen = Json::parse(req.body);
        res.set_content(R"({"data": [{"embedding": [0.5, -0.25, 1.0]}]})", "application/json");
    });
    std::vector<std::chrono::milliseconds> sleeps;
    RemoteEmbedder e(config_for(s.url("/emb"), &sleeps));
    const auto v = e.embed("some text");
    EXPECT_EQ(v.values, (std::vector<double>{0.5, -0.25, 1.0}));
    EXPECT_EQ(seen["input"], "some text");
    EXPECT_EQ(seen["model"], "test-model");
    EXPECT_EQ(e.model_id(), "test-model");
}
