// Copyright 2026 The Anomaly Score Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "anomaly/external_model.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <limits>
#include <nlohmann/json.hpp>

#include "anomaly/errors.h"

namespace anomaly {
namespace {

using nlohmann::json;

json image_request(const char* op, const ImageTensor& x) {
  json req;
  req["op"] = op;
  req["shape"] = {x.height(), x.width(), x.channels()};
  req["pixels"] = std::vector<double>(x.pixels().begin(), x.pixels().end());
  return req;
}

json parse_reply(const std::string& line) {
  json reply;
  try {
    reply = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(std::string("feature adapter sent malformed reply: ") + e.what());
  }
  if (!reply.is_object()) throw Error("feature adapter reply is not an object");
  if (reply.contains("error")) {
    throw Error("feature adapter error: " + reply["error"].dump());
  }
  return reply;
}

std::vector<double> number_array(const json& reply, const char* key,
                                 std::size_t expected) {
  if (!reply.contains(key) || !reply[key].is_array()) {
    throw Error(std::string("feature adapter reply lacks '") + key + "'");
  }
  // JSON has no NaN; adapters send null for a non-finite value.
  std::vector<double> values;
  values.reserve(reply[key].size());
  for (const json& v : reply[key]) {
    values.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                 : v.get<double>());
  }
  if (values.size() != expected) {
    throw Error(std::string("feature adapter '") + key + "' has " +
                std::to_string(values.size()) + " entries, expected " +
                std::to_string(expected));
  }
  return values;
}

}  // namespace

ExternalProcessModel::ExternalProcessModel(std::vector<std::string> argv,
                                           std::string options_json) {
  if (argv.empty()) throw InputError("external adapter: empty command");
  // A dead adapter must surface as an error rather than killing the process.
  ::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0) {
    throw Error(std::string("external adapter: pipe failed: ") +
                std::strerror(errno));
  }
  std::vector<char*> cargv;
  for (auto& a : argv) cargv.push_back(a.data());
  cargv.push_back(nullptr);

  child_ = ::fork();
  if (child_ < 0) {
    throw Error(std::string("external adapter: fork failed: ") +
                std::strerror(errno));
  }
  if (child_ == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execvp(cargv[0], cargv.data());
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  try {
    std::string hello;
    {
      std::lock_guard lock(mutex_);
      hello = round_trip("");
    }
    const json h = parse_reply(hello);
    model_id_ = h.at("model_id").get<std::string>();
    feature_dim_ = h.at("feature_dim").get<std::size_t>();
    if (model_id_.empty() || feature_dim_ == 0) {
      throw Error("external adapter: handshake has empty model_id or dim");
    }
    if (!options_json.empty()) {
      json req;
      req["op"] = "configure";
      req["options"] = json::parse(options_json);
      std::lock_guard lock(mutex_);
      parse_reply(round_trip(req.dump()));
    }
  } catch (const json::exception& e) {
    shutdown();
    throw Error(std::string("external adapter handshake: ") + e.what());
  } catch (...) {
    shutdown();
    throw;
  }
}

ExternalProcessModel::~ExternalProcessModel() { shutdown(); }

void ExternalProcessModel::shutdown() noexcept {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (child_ > 0) {
    int status = 0;
    ::waitpid(child_, &status, 0);
    child_ = -1;
  }
}

// Caller holds mutex_. An empty request only reads one line.
std::string ExternalProcessModel::round_trip(const std::string& request_line) const {
  if (!request_line.empty()) {
    std::string payload = request_line + "\n";
    std::size_t sent = 0;
    while (sent < payload.size()) {
      const ssize_t n =
          ::write(to_child_, payload.data() + sent, payload.size() - sent);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw Error(std::string("external adapter: write failed: ") +
                    std::strerror(errno));
      }
      sent += static_cast<std::size_t>(n);
    }
  }
  for (;;) {
    const auto nl = read_buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = read_buffer_.substr(0, nl);
      read_buffer_.erase(0, nl + 1);
      return line;
    }
    char chunk[65536];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(std::string("external adapter: read failed: ") +
                  std::strerror(errno));
    }
    if (n == 0) throw Error("external adapter closed its output");
    read_buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

FeatureVector ExternalProcessModel::forward(const ImageTensor& x) const {
  const std::string req = image_request("forward", x).dump();
  std::string line;
  {
    std::lock_guard lock(mutex_);
    line = round_trip(req);
  }
  return FeatureVector{number_array(parse_reply(line), "features", feature_dim_),
                       model_id_};
}

LossAndGradient ExternalProcessModel::loss_and_gradient(
    const FeatureVector& reference, const ImageTensor& probe) const {
  json req = image_request("loss_gradient", probe);
  req["reference"] = reference.values;
  std::string line;
  {
    std::lock_guard lock(mutex_);
    line = round_trip(req.dump());
  }
  const json reply = parse_reply(line);
  LossAndGradient out;
  out.gradient = number_array(reply, "gradient", probe.size());
  out.loss = reply.contains("loss") ? reply["loss"].get<double>()
                                    : l2_distance(forward(probe).values,
                                                  reference.values);
  return out;
}

std::vector<double> ExternalProcessModel::loss_gradient(
    const FeatureVector& reference, const ImageTensor& probe) const {
  return loss_and_gradient(reference, probe).gradient;
}

}  // namespace anomaly
