#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

namespace wireoff {

struct HttpRequest {
    std::string method;  // upper case
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

struct ServiceOptions {
    /// Snapshots of every session are kept here and replayed at start-up.
    std::optional<std::filesystem::path> state_dir;
    /// Worker cap for simulations that do not ask for one.
    int default_threads = 1;
};

struct Session;

/// Session store and request router. `handle` is safe to call from many
/// threads: fits and simulations serialize per session, reads share locks.
class Service {
public:
    explicit Service(ServiceOptions options = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    HttpResponse handle(const HttpRequest& request);

    std::size_t session_count() const;

private:
    std::shared_ptr<Session> find(const std::string& id) const;
    std::string next_id(const std::string& body);
    void persist(const Session& session) const;
    void restore();

    HttpResponse create_session(const HttpRequest& req);
    HttpResponse get_session(const Session& s) const;
    HttpResponse delete_session(const std::string& id);
    HttpResponse fit(Session& s, const HttpRequest& req);
    HttpResponse forecast(const Session& s, const HttpRequest& req) const;
    HttpResponse simulate(Session& s, const HttpRequest& req);
    HttpResponse recommendation(const Session& s) const;
    HttpResponse whatif(const Session& s, const HttpRequest& req) const;
    HttpResponse diagnostics(const Session& s) const;

    ServiceOptions options_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t counter_ = 0;
};

/// URL query string (without '?') into decoded key/value pairs.
std::map<std::string, std::string> parse_query(const std::string& query);

/// The OpenAPI document served at /v1/openapi.json.
std::string openapi_document();

/// Blocking HTTP/1.1 front end over a Service.
class HttpServer {
public:
    HttpServer(Service& service, std::string host, int port);
    ~HttpServer();

    /// Binds the socket; returns the bound port (useful with port 0).
    int bind();
    /// Serves until stop() is called. Binds first if needed.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace wireoff
