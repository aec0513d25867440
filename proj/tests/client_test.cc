// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/client/client.h"

#include <deque>
#include <functional>

#include <gtest/gtest.h>

#include "modelhub/backend/embedded_worker.h"
#include "modelhub/backend/server.h"
#include "support/temp_dir.h"
#include "support/test_data.h"

namespace modelhub::client {
namespace {

using namespace std::chrono_literals;
using nlohmann::json;
using modelhub::testing::sample_path;

// Answers each request through a handler and records what it saw.
class FakeTransport : public Transport {
 public:
  using Handler = std::function<HttpResponse(const HttpRequest&)>;
  explicit FakeTransport(Handler h) : handler_(std::move(h)) {}

  HttpResponse send(const HttpRequest& request) override {
    requests.push_back(request);
    return handler_(request);
  }

  std::vector<HttpRequest> requests;

 private:
  Handler handler_;
};

HttpResponse ok(const json& body) { return {200, body.dump()}; }

json model_record(const std::string& id, const std::string& name) {
  return {{"id", id},
          {"name", name},
          {"manifest",
           {{"name", name},
            {"description", nullptr},
            {"comment_tag", "#@"},
            {"source_digest", std::string(64, '0')},
            {"components", json::array()}}}};
}

SessionOptions fast() {
  SessionOptions o;
  o.poll_interval = 1ms;
  o.timeout = 200ms;
  o.retry_backoff = 1ms;
  return o;
}

TEST(ClientTest, SendsTokenAndAcceptHeaders) {
  auto t = std::make_shared<FakeTransport>([](const HttpRequest&) { return ok(json::array()); });
  ClientSession s(t, "abc", fast());
  s.list_models();
  ASSERT_EQ(t->requests.size(), 1u);
  EXPECT_EQ(t->requests[0].headers.at("Authorization"), "Token abc");
  EXPECT_EQ(t->requests[0].headers.at("Accept"), "application/json");
  EXPECT_EQ(t->requests[0].target, "/api/models/");
}

TEST(ClientTest, GetsRetryTransportFailures) {
  int failures = 3;
  auto t = std::make_shared<FakeTransport>([&](const HttpRequest&) {
    if (failures-- > 0) throw TransportError("reset");
    return ok(json::array());
  });
  ClientSession s(t, "abc", fast());
  EXPECT_NO_THROW(s.list_models());
  EXPECT_EQ(t->requests.size(), 4u);
}

TEST(ClientTest, GetsGiveUpAfterRetries) {
  auto t = std::make_shared<FakeTransport>(
      [](const HttpRequest&) -> HttpResponse { throw TransportError("down"); });
  ClientSession s(t, "abc", fast());
  EXPECT_THROW(s.list_models(), TransportError);
  EXPECT_EQ(t->requests.size(), 4u);
}

TEST(ClientTest, MutationsNeverRetry) {
  auto t = std::make_shared<FakeTransport>(
      [](const HttpRequest&) -> HttpResponse { throw TransportError("reset"); });
  ClientSession s(t, "abc", fast());
  EXPECT_THROW(s.post_json("/api/models/x/run/", json::object()), TransportError);
  EXPECT_THROW(s.put_json("/api/models/x/interface/objects/a/", {{"value", 1}}),
               TransportError);
  EXPECT_THROW(s.del("/api/models/x/"), TransportError);
  EXPECT_THROW(s.new_model_from_source("m.py", "", "M"), TransportError);
  EXPECT_EQ(t->requests.size(), 4u);
}

TEST(ClientTest, HttpErrorsAreNotRetried) {
  auto t = std::make_shared<FakeTransport>(
      [](const HttpRequest&) { return HttpResponse{500, "oops"}; });
  ClientSession s(t, "abc", fast());
  try {
    s.list_models();
    FAIL();
  } catch (const ApiError& e) {
    EXPECT_EQ(e.status(), 500);
    EXPECT_STREQ(e.what(), "HTTP 500: request failed with status 500");
  }
  EXPECT_EQ(t->requests.size(), 1u);
}

TEST(ClientTest, ErrorBodiesMapToExceptions) {
  auto t = std::make_shared<FakeTransport>([](const HttpRequest& r) {
    json err = {{"error", {{"code", 404}, {"message", "model 'x' not found"}}}};
    if (r.method == "POST") {
      return HttpResponse{409, json{{"error",
                                     {{"code", 409},
                                      {"message", "missing required inputs: case"},
                                      {"detail", {{"missing", {"case"}}}}}}}
                                   .dump()};
    }
    return HttpResponse{404, err.dump()};
  });
  ClientSession s(t, "abc", fast());
  try {
    s.get_model("x");
    FAIL();
  } catch (const NotFoundError& e) {
    EXPECT_EQ(e.status(), 404);
    EXPECT_EQ(e.server_message(), "model 'x' not found");
  }
  try {
    s.post_json("/api/models/x/run/", json::object());
    FAIL();
  } catch (const NotFoundError&) {
    FAIL();
  } catch (const ApiError& e) {
    EXPECT_EQ(e.status(), 409);
    EXPECT_EQ(e.detail()["missing"][0], "case");
    EXPECT_STREQ(e.what(), "HTTP 409: missing required inputs: case");
  }
}

TEST(ClientTest, InvalidJsonOnSuccessIsApiError) {
  auto t = std::make_shared<FakeTransport>(
      [](const HttpRequest&) { return HttpResponse{200, "<html>"}; });
  ClientSession s(t, "abc", fast());
  EXPECT_THROW(s.list_models(), ApiError);
}

TEST(ClientTest, TargetsArePercentEncoded) {
  auto t = std::make_shared<FakeTransport>([](const HttpRequest& r) {
    if (r.target.rfind("/api/models/?", 0) == 0) {
      return ok(json::array({{{"id", "a b/c"}, {"name", "A+B Model"}}}));
    }
    return ok(model_record("a b/c", "A+B Model"));
  });
  ClientSession s(t, "abc", fast());
  ModelHandle m = s.get_model_with_name("A+B Model");
  ASSERT_EQ(t->requests.size(), 2u);
  EXPECT_EQ(t->requests[0].target, "/api/models/?name=A%2BB%20Model");
  EXPECT_EQ(t->requests[1].target, "/api/models/a%20b%2Fc/");
  m.set_interface_object("x&y", 1);
  EXPECT_EQ(t->requests[2].target, "/api/models/a%20b%2Fc/interface/objects/x%26y/");
  EXPECT_EQ(json::parse(t->requests[2].body), json({{"value", 1}}));
}

TEST(ClientTest, NameLookupMatchesExactly) {
  auto t = std::make_shared<FakeTransport>([](const HttpRequest&) {
    return ok(json::array({{{"id", "1"}, {"name", "a"}}}));
  });
  ClientSession s(t, "abc", fast());
  EXPECT_THROW(s.get_model_with_name("A"), NotFoundError);
}

TEST(ClientTest, MultipartUploadShape) {
  auto t = std::make_shared<FakeTransport>(
      [](const HttpRequest&) { return HttpResponse{201, model_record("m1", "N").dump()}; });
  ClientSession s(t, "abc", fast());
  s.new_model_from_source("model.py", "x = 1\n", "N", "script");
  const HttpRequest& r = t->requests.at(0);
  EXPECT_EQ(r.method, "POST");
  ASSERT_EQ(r.content_type.rfind("multipart/form-data; boundary=modelhub-", 0), 0u);
  const std::string boundary = r.content_type.substr(r.content_type.find('=') + 1);
  EXPECT_NE(r.body.find("name=\"name\"\r\n\r\nN\r\n"), std::string::npos);
  EXPECT_NE(r.body.find("name=\"kernel_tag\"\r\n\r\nscript\r\n"), std::string::npos);
  EXPECT_NE(r.body.find("name=\"file\"; filename=\"model.py\""), std::string::npos);
  EXPECT_NE(r.body.find("\r\n\r\nx = 1\n\r\n--" + boundary + "--\r\n"), std::string::npos);
}

TEST(ClientTest, WaitForTimesOutWithExecutionId) {
  auto t = std::make_shared<FakeTransport>([](const HttpRequest&) {
    return ok({{"id", "e1"}, {"model_id", "m1"}, {"status", "running"}});
  });
  ClientSession s(t, "abc", fast());
  try {
    s.wait_for("e1");
    FAIL();
  } catch (const TimeoutError& e) {
    EXPECT_EQ(e.execution_id(), "e1");
    EXPECT_NE(std::string(e.what()).find("e1"), std::string::npos);
  }
}

TEST(ClientTest, RunWaitsUntilTerminal) {
  std::deque<std::string> statuses = {"queued", "running", "running", "success"};
  auto t = std::make_shared<FakeTransport>([&](const HttpRequest& r) {
    if (r.target.rfind("/api/executions/", 0) == 0) {
      std::string st = statuses.front();
      if (statuses.size() > 1) statuses.pop_front();
      return ok({{"id", "e1"}, {"model_id", "m1"}, {"status", st}});
    }
    if (r.method == "POST") {
      return HttpResponse{201, json{{"id", "e1"}, {"model_id", "m1"}, {"status", "queued"}}
                                   .dump()};
    }
    return ok(model_record("m1", "M"));
  });
  ClientSession s(t, "abc", fast());
  ModelHandle m(s, model_record("m1", "M"));
  Execution e = m.run();
  EXPECT_EQ(e.status, "success");
  EXPECT_TRUE(e.terminal());
  EXPECT_EQ(m.run(false).status, "queued");
}

TEST(ClientTest, LatestExecutionAccessors) {
  auto t = std::make_shared<FakeTransport>([](const HttpRequest& r) {
    if (r.target == "/api/models/m1/status/") {
      return ok({{"status", "success"}, {"execution_id", "e9"}});
    }
    if (r.target == "/api/executions/e9/results/") {
      return ok({{"results", {{"obj", 3}}}});
    }
    if (r.target == "/api/executions/e9/log/") return ok({{"text", "a\nb\n"}});
    return HttpResponse{404, ""};
  });
  ClientSession s(t, "abc", fast());
  ModelHandle m(s, model_record("m1", "M"));
  EXPECT_EQ(m.get_status(), "success");
  EXPECT_EQ(m.get_output("obj"), 3);
  EXPECT_THROW(m.get_output("missing"), NotFoundError);
  EXPECT_EQ(m.get_execution_log(), "a\nb\n");
}

TEST(ClientTest, NoExecutionYetIsNotFound) {
  auto t = std::make_shared<FakeTransport>([](const HttpRequest&) {
    return ok({{"status", "created"}, {"execution_id", nullptr}});
  });
  ClientSession s(t, "abc", fast());
  ModelHandle m(s, model_record("m1", "M"));
  EXPECT_THROW(m.get_results(), NotFoundError);
}

TEST(ClientTest, UrlEncode) {
  EXPECT_EQ(url_encode("A+B Model"), "A%2BB%20Model");
  EXPECT_EQ(url_encode("a/b?c#d&e=f"), "a%2Fb%3Fc%23d%26e%3Df");
  EXPECT_EQ(url_encode("plain-name_1.x"), "plain-name_1.x");
  EXPECT_EQ(url_encode("é"), "%C3%A9");
}

// ---- record / replay -------------------------------------------------------

class RecordingTransport : public Transport {
 public:
  explicit RecordingTransport(std::shared_ptr<Transport> inner) : inner_(std::move(inner)) {}
  HttpResponse send(const HttpRequest& request) override {
    HttpResponse r = inner_->send(request);
    tape.emplace_back(request, r);
    return r;
  }
  std::vector<std::pair<HttpRequest, HttpResponse>> tape;

 private:
  std::shared_ptr<Transport> inner_;
};

class ReplayTransport : public Transport {
 public:
  explicit ReplayTransport(std::vector<std::pair<HttpRequest, HttpResponse>> tape)
      : tape_(std::move(tape)) {}
  HttpResponse send(const HttpRequest& request) override {
    if (next_ >= tape_.size()) throw TransportError("tape exhausted");
    const auto& [expected, response] = tape_[next_++];
    EXPECT_EQ(request.method, expected.method);
    EXPECT_EQ(request.target, expected.target);
    return response;
  }
  std::size_t remaining() const { return tape_.size() - next_; }

 private:
  std::vector<std::pair<HttpRequest, HttpResponse>> tape_;
  std::size_t next_ = 0;
};

// The user-facing outcome of a scripted session.
std::vector<std::string> scripted_session(std::shared_ptr<Transport> t) {
  SessionOptions o;
  o.poll_interval = 10ms;
  ClientSession s(std::move(t), "token", o);
  std::vector<std::string> out;
  ModelHandle m = s.new_model(sample_path("dcopf.mhl"));
  m.set_interface_object("feastol", 1e-3);
  m.set_interface_file("case", sample_path("ieee14.m"));
  out.push_back(m.show_recipe());
  out.push_back(m.show_components());
  Execution e = m.run();
  out.push_back(e.status);
  out.push_back(m.get_status());
  out.push_back(m.get_results().dump());
  out.push_back(m.get_execution_log());
  out.push_back(s.get_model_with_name("DCOPF Model").record().dump());
  return out;
}

TEST(ClientReplayTest, ReplayedSessionMatchesLiveSession) {
  modelhub::testing::TempDir dir;
  backend::Store store(dir.path());
  backend::ModelService service(store);
  const std::string token = service.create_token("alice", backend::TokenClass::kUser);
  backend::EmbeddedWorker worker(service);
  worker.start();
  backend::HttpServer server(service, {"127.0.0.1", 0, 8});
  const int port = server.start();

  // The live session authenticates with the real token; the transport is
  // wrapped so the token header is rewritten on the way out.
  class Authorizing : public Transport {
   public:
    Authorizing(std::shared_ptr<Transport> inner, std::string token)
        : inner_(std::move(inner)), token_(std::move(token)) {}
    HttpResponse send(const HttpRequest& r) override {
      HttpRequest copy = r;
      copy.headers["Authorization"] = "Token " + token_;
      return inner_->send(copy);
    }

   private:
    std::shared_ptr<Transport> inner_;
    std::string token_;
  };
  auto recorder = std::make_shared<RecordingTransport>(std::make_shared<Authorizing>(
      make_http_transport("http://127.0.0.1:" + std::to_string(port)), token));
  const auto live = scripted_session(recorder);
  const auto tape = recorder->tape;
  recorder.reset();  // closes pooled keep-alive connections

  worker.stop();
  service.shutdown();
  server.stop();

  // Polling is timing-dependent, so the replay tape keeps exactly the
  // exchanges the live session made.
  auto replay = std::make_shared<ReplayTransport>(tape);
  const auto replayed = scripted_session(replay);
  EXPECT_EQ(replayed, live);
  EXPECT_EQ(replay->remaining(), 0u);
  EXPECT_EQ(live[2], "success");
}

}  // namespace
}  // namespace modelhub::client
