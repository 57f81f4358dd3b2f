#include "causalflip/util/transport.hpp"

#include <cstdlib>
#include <filesystem>
#include <unistd.h>
#include <sys/wait.h>

#include <fmt/format.h>

#include "causalflip/util/strings.hpp"
#include "httplib.h"

namespace causalflip::util {

namespace {

class HttpJsonTransport final : public JsonTransport {
 public:
  explicit HttpJsonTransport(HttpOptions options) : options_(std::move(options)) {}

  nlohmann::json post(const nlohmann::json& body) override {
    // httplib clients are not safe to share across threads; one per call.
    httplib::Client client(options_.base_url);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - seconds);
    client.set_connection_timeout(seconds.count(), static_cast<time_t>(micros.count()));
    client.set_read_timeout(seconds.count(), static_cast<time_t>(micros.count()));
    client.set_write_timeout(seconds.count(), static_cast<time_t>(micros.count()));
    httplib::Headers headers;
    if (options_.bearer_token) headers.emplace("Authorization", "Bearer " + *options_.bearer_token);

    auto result = client.Post(options_.path, headers, body.dump(), "application/json");
    if (!result) {
      const auto err = result.error();
      const auto kind = (err == httplib::Error::Read || err == httplib::Error::Write ||
                         err == httplib::Error::ConnectionTimeout)
                            ? TransportError::Kind::Timeout
                            : TransportError::Kind::Unreachable;
      throw TransportError(kind, fmt::format("POST {}{}: {}", options_.base_url, options_.path, httplib::to_string(err)));
    }
    // 400/413/422 reject this particular request; any other failure status
    // (auth, routing, server errors) is a property of the service.
    const bool request_specific = result->status == 400 || result->status == 413 || result->status == 422;
    if (result->status >= 300 && !request_specific) {
      throw TransportError(TransportError::Kind::BadStatus,
                           fmt::format("POST {}{}: HTTP {}", options_.base_url, options_.path, result->status));
    }
    if (request_specific) {
      throw TransportError(TransportError::Kind::BadPayload,
                           fmt::format("POST {}{}: HTTP {}: {}", options_.base_url, options_.path, result->status,
                                       result->body.substr(0, 200)));
    }
    try {
      return nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::parse_error&) {
      throw TransportError(TransportError::Kind::BadPayload,
                           fmt::format("POST {}{}: response is not JSON", options_.base_url, options_.path));
    }
  }

  std::string describe() const override { return options_.base_url + options_.path; }

 private:
  HttpOptions options_;
};

class TempFile {
 public:
  TempFile() {
    auto pattern = (std::filesystem::temp_directory_path() / "causalflip-XXXXXX").string();
    const int fd = ::mkstemp(pattern.data());
    if (fd < 0) throw Error("cannot create temporary file");
    ::close(fd);
    path_ = pattern;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

class ProcessJsonTransport final : public JsonTransport {
 public:
  explicit ProcessJsonTransport(std::string command) : command_(std::move(command)) {}

  nlohmann::json post(const nlohmann::json& body) override {
    TempFile in;
    TempFile out;
    write_file(in.path(), body.dump());
    const auto line = fmt::format("( {} ) < {} > {}", command_, shell_quote(in.path()), shell_quote(out.path()));
    const int status = std::system(line.c_str());
    if (status == -1 || !WIFEXITED(status)) {
      throw TransportError(TransportError::Kind::Unreachable, fmt::format("cannot run \"{}\"", command_));
    }
    const int code = WEXITSTATUS(status);
    if (code == 126 || code == 127) {
      throw TransportError(TransportError::Kind::Unreachable, fmt::format("\"{}\" is not runnable", command_));
    }
    if (code != 0) {
      throw TransportError(TransportError::Kind::BadStatus, fmt::format("\"{}\" exited with {}", command_, code));
    }
    try {
      return nlohmann::json::parse(read_file(out.path()));
    } catch (const nlohmann::json::parse_error&) {
      throw TransportError(TransportError::Kind::BadPayload, fmt::format("\"{}\" printed invalid JSON", command_));
    }
  }

  std::string describe() const override { return "process:" + command_; }

 private:
  std::string command_;
};

}  // namespace

std::unique_ptr<JsonTransport> make_http_transport(HttpOptions options) {
  return std::make_unique<HttpJsonTransport>(std::move(options));
}

std::unique_ptr<JsonTransport> make_process_transport(std::string command) {
  return std::make_unique<ProcessJsonTransport>(std::move(command));
}

}  // namespace causalflip::util
