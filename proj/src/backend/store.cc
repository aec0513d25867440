// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/backend/store.h"

#include <fcntl.h>
#include <sqlite3.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "modelhub/util/crypto.h"

namespace modelhub::backend {

namespace fs = std::filesystem;

void to_json(nlohmann::json& j, const InterfaceValue& v) {
  if (v.kind == InterfaceValue::Kind::kObject) {
    j = {{"kind", "object"}, {"value", v.value}, {"updated_at", v.updated_at}};
  } else {
    j = {{"kind", "file"},
         {"blob", v.blob},
         {"filename", v.filename},
         {"size", v.size},
         {"updated_at", v.updated_at}};
  }
}

void from_json(const nlohmann::json& j, InterfaceValue& v) {
  v = InterfaceValue{};
  v.updated_at = j.value("updated_at", std::int64_t{0});
  if (j.at("kind") == "object") {
    v.kind = InterfaceValue::Kind::kObject;
    v.value = j.at("value");
  } else {
    v.kind = InterfaceValue::Kind::kFile;
    v.blob = j.at("blob").get<std::string>();
    v.filename = j.value("filename", "");
    v.size = j.value("size", std::int64_t{0});
  }
}

// ---- SQLite helpers --------------------------------------------------------

class Store::Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw StoreError(fmt::format("prepare failed: {} ({})", sqlite3_errmsg(db), sql));
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int i, const std::string& v) {
    check(sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()),
                            SQLITE_TRANSIENT));
    return *this;
  }
  Statement& bind(int i, std::int64_t v) {
    check(sqlite3_bind_int64(stmt_, i, v));
    return *this;
  }
  Statement& bind(int i, int v) { return bind(i, static_cast<std::int64_t>(v)); }
  Statement& bind(int i, const std::optional<std::string>& v) {
    if (v) return bind(i, *v);
    check(sqlite3_bind_null(stmt_, i));
    return *this;
  }
  Statement& bind(int i, const std::optional<std::int64_t>& v) {
    if (v) return bind(i, *v);
    check(sqlite3_bind_null(stmt_, i));
    return *this;
  }

  template <typename... Args>
  Statement& bind_all(const Args&... args) {
    int i = 0;
    (bind(++i, args), ...);
    return *this;
  }

  // True while a row is available.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    if (rc == SQLITE_CONSTRAINT) {
      throw DuplicateNameError(sqlite3_errmsg(db_));
    }
    throw StoreError(fmt::format("step failed: {}", sqlite3_errmsg(db_)));
  }

  void run() {
    while (step()) {
    }
  }

  void reset() {
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
  }

  int changes() const { return sqlite3_changes(db_); }

  bool is_null(int col) const { return sqlite3_column_type(stmt_, col) == SQLITE_NULL; }
  std::string text(int col) const {
    const auto* p = sqlite3_column_text(stmt_, col);
    return p ? std::string(reinterpret_cast<const char*>(p),
                           static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col)))
             : std::string();
  }
  std::optional<std::string> optional_text(int col) const {
    if (is_null(col)) return std::nullopt;
    return text(col);
  }
  std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }
  std::optional<std::int64_t> optional_integer(int col) const {
    if (is_null(col)) return std::nullopt;
    return integer(col);
  }

 private:
  void check(int rc) {
    if (rc != SQLITE_OK) {
      throw StoreError(fmt::format("bind failed: {}", sqlite3_errmsg(db_)));
    }
  }

  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

class Store::Transaction {
 public:
  explicit Transaction(Store& store) : store_(store) {
    store_.exec("BEGIN IMMEDIATE");
  }
  ~Transaction() {
    if (!done_) {
      try {
        store_.exec("ROLLBACK");
      } catch (...) {
      }
    }
  }
  void commit() {
    store_.exec("COMMIT");
    done_ = true;
  }

 private:
  Store& store_;
  bool done_ = false;
};

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS tokens(
  hash TEXT PRIMARY KEY,
  user TEXT NOT NULL,
  class TEXT NOT NULL,
  created_at INTEGER NOT NULL);
CREATE TABLE IF NOT EXISTS models(
  seq INTEGER PRIMARY KEY AUTOINCREMENT,
  id TEXT UNIQUE NOT NULL,
  owner TEXT NOT NULL,
  name TEXT NOT NULL,
  kernel_tag TEXT NOT NULL,
  filename TEXT NOT NULL,
  source_blob TEXT NOT NULL,
  manifest TEXT NOT NULL,
  diagnostics TEXT NOT NULL,
  created_at INTEGER NOT NULL,
  UNIQUE(owner, name));
CREATE TABLE IF NOT EXISTS interface_values(
  model_id TEXT NOT NULL,
  name TEXT NOT NULL,
  data TEXT NOT NULL,
  PRIMARY KEY(model_id, name));
CREATE TABLE IF NOT EXISTS executions(
  seq INTEGER PRIMARY KEY AUTOINCREMENT,
  id TEXT UNIQUE NOT NULL,
  model_id TEXT NOT NULL,
  owner TEXT NOT NULL,
  kernel_tag TEXT NOT NULL,
  status TEXT NOT NULL,
  snapshot TEXT NOT NULL,
  results TEXT NOT NULL,
  worker_id TEXT,
  requeues INTEGER NOT NULL DEFAULT 0,
  created_at INTEGER NOT NULL,
  queued_at INTEGER,
  started_at INTEGER,
  ended_at INTEGER);
CREATE INDEX IF NOT EXISTS executions_by_model ON executions(model_id, seq);
CREATE INDEX IF NOT EXISTS executions_by_status ON executions(status, seq);
CREATE TABLE IF NOT EXISTS execution_logs(
  execution_id TEXT NOT NULL,
  seq INTEGER NOT NULL,
  line TEXT NOT NULL,
  at INTEGER NOT NULL,
  PRIMARY KEY(execution_id, seq));
CREATE TABLE IF NOT EXISTS workers(
  id TEXT PRIMARY KEY,
  owner TEXT NOT NULL,
  kernel_tags TEXT NOT NULL,
  registered_at INTEGER NOT NULL,
  last_heartbeat INTEGER NOT NULL,
  active_job TEXT);
)sql";

constexpr const char* kExecutionColumns =
    "id, seq, model_id, owner, kernel_tag, status, snapshot, results, "
    "worker_id, requeues, created_at, queued_at, started_at, ended_at";

constexpr const char* kModelColumns =
    "id, owner, name, kernel_tag, filename, source_blob, manifest, "
    "diagnostics, created_at, seq";

std::string status_str(ExecutionStatus s) { return std::string(status_name(s)); }

void write_fully(int fd, std::string_view bytes, const fs::path& path) {
  while (!bytes.empty()) {
    const ssize_t n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw StoreError(fmt::format("write {}: {}", path.string(), std::strerror(errno)));
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

void fsync_path(const fs::path& path, int flags) {
  const int fd = ::open(path.c_str(), flags);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

}  // namespace

Store::Store(fs::path data_dir) : data_dir_(std::move(data_dir)) {
  blob_dir_ = data_dir_ / "blobs";
  fs::create_directories(blob_dir_);
  const fs::path db_path = data_dir_ / "modelhub.db";
  if (sqlite3_open_v2(db_path.c_str(), &db_,
                      SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE |
                          SQLITE_OPEN_FULLMUTEX,
                      nullptr) != SQLITE_OK) {
    std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    throw StoreError(fmt::format("cannot open {}: {}", db_path.string(), msg));
  }
  sqlite3_busy_timeout(db_, 5000);
  exec("PRAGMA journal_mode=WAL");
  exec("PRAGMA synchronous=FULL");
  exec("PRAGMA foreign_keys=ON");
  exec(kSchema);
}

Store::~Store() { sqlite3_close(db_); }

void Store::exec(const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw StoreError(fmt::format("{} ({})", msg, sql));
  }
}

// ---- tokens ----------------------------------------------------------------

void Store::add_token(const std::string& token_hash, const TokenRecord& record) {
  std::lock_guard lock(mu_);
  Statement(db_, "INSERT INTO tokens(hash, user, class, created_at) VALUES(?,?,?,?)")
      .bind_all(token_hash, record.user,
                std::string(token_class_name(record.token_class)),
                record.created_at)
      .run();
}

std::optional<TokenRecord> Store::find_token(const std::string& token_hash) {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT hash, user, class, created_at FROM tokens WHERE hash = ?");
  st.bind(1, token_hash);
  if (!st.step()) return std::nullopt;
  if (!util::constant_time_equal(st.text(0), token_hash)) return std::nullopt;
  TokenRecord r;
  r.user = st.text(1);
  r.token_class = parse_token_class(st.text(2)).value_or(TokenClass::kUser);
  r.created_at = st.integer(3);
  return r;
}

// ---- blobs -----------------------------------------------------------------

std::string Store::put_blob(std::string_view bytes) {
  const std::string sha = util::sha256_hex(bytes);
  const fs::path dir = blob_dir_ / sha.substr(0, 2);
  const fs::path path = dir / sha;
  if (fs::exists(path)) return sha;
  fs::create_directories(dir);
  const fs::path tmp = dir / (sha + ".tmp." + util::random_hex(6));
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw StoreError(fmt::format("open {}: {}", tmp.string(), std::strerror(errno)));
  }
  try {
    write_fully(fd, bytes, tmp);
  } catch (...) {
    ::close(fd);
    fs::remove(tmp);
    throw;
  }
  ::fsync(fd);
  ::close(fd);
  fs::rename(tmp, path);
  fsync_path(dir, O_RDONLY | O_DIRECTORY);
  return sha;
}

std::string Store::get_blob(const std::string& sha) {
  if (sha.size() < 2 || sha.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw StoreError("invalid blob id");
  }
  std::ifstream in(blob_dir_ / sha.substr(0, 2) / sha, std::ios::binary);
  if (!in) throw StoreError(fmt::format("blob {} is missing", sha));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- models ----------------------------------------------------------------

ModelRow Store::read_model(Statement& st) {
  ModelRow m;
  m.id = st.text(0);
  m.owner = st.text(1);
  m.name = st.text(2);
  m.kernel_tag = st.text(3);
  m.filename = st.text(4);
  m.source_blob = st.text(5);
  m.manifest = nlohmann::json::parse(st.text(6));
  m.diagnostics = nlohmann::json::parse(st.text(7));
  m.created_at = st.integer(8);
  m.seq = st.integer(9);
  return m;
}

void Store::insert_model(const ModelRow& row) {
  std::lock_guard lock(mu_);
  Transaction tx(*this);
  {
    Statement dup(db_, "SELECT 1 FROM models WHERE owner = ? AND name = ?");
    dup.bind_all(row.owner, row.name);
    if (dup.step()) {
      throw DuplicateNameError(
          fmt::format("a model named '{}' already exists", row.name));
    }
  }
  Statement(db_,
            "INSERT INTO models(id, owner, name, kernel_tag, filename, "
            "source_blob, manifest, diagnostics, created_at) "
            "VALUES(?,?,?,?,?,?,?,?,?)")
      .bind_all(row.id, row.owner, row.name, row.kernel_tag, row.filename,
                row.source_blob, row.manifest.dump(), row.diagnostics.dump(),
                row.created_at)
      .run();
  tx.commit();
}

std::optional<ModelRow> Store::find_model(const std::string& id) {
  std::lock_guard lock(mu_);
  Statement st(db_, fmt::format("SELECT {} FROM models WHERE id = ?", kModelColumns).c_str());
  st.bind(1, id);
  if (!st.step()) return std::nullopt;
  return read_model(st);
}

std::vector<ModelRow> Store::list_models(const std::string& owner,
                                         const std::optional<std::string>& name) {
  std::lock_guard lock(mu_);
  std::vector<ModelRow> out;
  if (name) {
    Statement st(db_, fmt::format("SELECT {} FROM models WHERE owner = ? AND "
                                  "name = ? ORDER BY seq DESC",
                                  kModelColumns)
                          .c_str());
    st.bind_all(owner, *name);
    while (st.step()) out.push_back(read_model(st));
  } else {
    Statement st(db_, fmt::format("SELECT {} FROM models WHERE owner = ? "
                                  "ORDER BY seq DESC",
                                  kModelColumns)
                          .c_str());
    st.bind(1, owner);
    while (st.step()) out.push_back(read_model(st));
  }
  return out;
}

bool Store::delete_model(const std::string& id) {
  std::lock_guard lock(mu_);
  Transaction tx(*this);
  Statement(db_,
            "DELETE FROM execution_logs WHERE execution_id IN "
            "(SELECT id FROM executions WHERE model_id = ?)")
      .bind_all(id)
      .run();
  Statement(db_, "DELETE FROM executions WHERE model_id = ?").bind_all(id).run();
  Statement(db_, "DELETE FROM interface_values WHERE model_id = ?").bind_all(id).run();
  Statement del(db_, "DELETE FROM models WHERE id = ?");
  del.bind_all(id).run();
  const bool removed = del.changes() > 0;
  tx.commit();
  return removed;
}

void Store::set_interface_value(const std::string& model_id, const std::string& name,
                                const InterfaceValue& value) {
  std::lock_guard lock(mu_);
  Statement(db_,
            "INSERT INTO interface_values(model_id, name, data) VALUES(?,?,?) "
            "ON CONFLICT(model_id, name) DO UPDATE SET data = excluded.data")
      .bind_all(model_id, name, nlohmann::json(value).dump())
      .run();
}

std::map<std::string, InterfaceValue> Store::interface_values(
    const std::string& model_id) {
  std::lock_guard lock(mu_);
  std::map<std::string, InterfaceValue> out;
  Statement st(db_, "SELECT name, data FROM interface_values WHERE model_id = ?");
  st.bind(1, model_id);
  while (st.step()) {
    out.emplace(st.text(0), nlohmann::json::parse(st.text(1)).get<InterfaceValue>());
  }
  return out;
}

// ---- executions --------------------------------------------------------------

ExecutionRow Store::read_execution(Statement& st) {
  ExecutionRow e;
  e.id = st.text(0);
  e.seq = st.integer(1);
  e.model_id = st.text(2);
  e.owner = st.text(3);
  e.kernel_tag = st.text(4);
  e.status = parse_status(st.text(5)).value_or(ExecutionStatus::kError);
  e.snapshot = nlohmann::json::parse(st.text(6)).get<std::map<std::string, InterfaceValue>>();
  e.results = nlohmann::json::parse(st.text(7));
  e.worker_id = st.optional_text(8);
  e.requeues = static_cast<int>(st.integer(9));
  e.created_at = st.integer(10);
  e.queued_at = st.optional_integer(11);
  e.started_at = st.optional_integer(12);
  e.ended_at = st.optional_integer(13);
  return e;
}

void Store::append_log_locked(const std::string& id,
                              const std::vector<std::string>& lines,
                              std::int64_t now) {
  if (lines.empty()) return;
  std::int64_t next = 0;
  {
    Statement st(db_, "SELECT COALESCE(MAX(seq) + 1, 0) FROM execution_logs WHERE execution_id = ?");
    st.bind(1, id);
    if (st.step()) next = st.integer(0);
  }
  Statement ins(db_, "INSERT INTO execution_logs(execution_id, seq, line, at) VALUES(?,?,?,?)");
  for (const auto& line : lines) {
    ins.bind_all(id, next++, line, now);
    ins.run();
    ins.reset();
  }
}

void Store::insert_execution(const ExecutionRow& row,
                             const std::vector<std::string>& log_lines,
                             const std::optional<std::string>& fail_message) {
  std::lock_guard lock(mu_);
  Transaction tx(*this);
  Statement(db_,
            "INSERT INTO executions(id, model_id, owner, kernel_tag, status, "
            "snapshot, results, created_at) VALUES(?,?,?,?,?,?,?,?)")
      .bind_all(row.id, row.model_id, row.owner, row.kernel_tag,
                status_str(ExecutionStatus::kCreated),
                nlohmann::json(row.snapshot).dump(), std::string("{}"),
                row.created_at)
      .run();
  std::vector<std::string> lines = log_lines;
  if (fail_message) lines.push_back(*fail_message);
  append_log_locked(row.id, lines, row.created_at);
  if (fail_message) {
    Statement(db_,
              "UPDATE executions SET status = ?, ended_at = ? WHERE id = ? AND "
              "status = ?")
        .bind_all(status_str(ExecutionStatus::kError), row.created_at, row.id,
                  status_str(ExecutionStatus::kCreated))
        .run();
  } else {
    Statement(db_,
              "UPDATE executions SET status = ?, queued_at = ? WHERE id = ? AND "
              "status = ?")
        .bind_all(status_str(ExecutionStatus::kQueued), row.created_at, row.id,
                  status_str(ExecutionStatus::kCreated))
        .run();
  }
  tx.commit();
}

std::optional<ExecutionRow> Store::find_execution(const std::string& id) {
  std::lock_guard lock(mu_);
  Statement st(db_, fmt::format("SELECT {} FROM executions WHERE id = ?", kExecutionColumns).c_str());
  st.bind(1, id);
  if (!st.step()) return std::nullopt;
  return read_execution(st);
}

std::optional<ExecutionRow> Store::latest_execution(const std::string& model_id) {
  std::lock_guard lock(mu_);
  Statement st(db_, fmt::format("SELECT {} FROM executions WHERE model_id = ? "
                                "ORDER BY seq DESC LIMIT 1",
                                kExecutionColumns)
                        .c_str());
  st.bind(1, model_id);
  if (!st.step()) return std::nullopt;
  return read_execution(st);
}

std::vector<ExecutionRow> Store::list_executions(const std::string& model_id) {
  std::lock_guard lock(mu_);
  std::vector<ExecutionRow> out;
  Statement st(db_, fmt::format("SELECT {} FROM executions WHERE model_id = ? "
                                "ORDER BY seq",
                                kExecutionColumns)
                        .c_str());
  st.bind(1, model_id);
  while (st.step()) out.push_back(read_execution(st));
  return out;
}

std::optional<std::string> Store::claim_job(const std::string& worker_id,
                                            const std::set<std::string>& tags,
                                            std::int64_t now) {
  std::lock_guard lock(mu_);
  Transaction tx(*this);
  std::optional<std::string> chosen;
  {
    Statement st(db_,
                 "SELECT id, kernel_tag FROM executions WHERE status = 'queued' "
                 "OR (status = 'running' AND worker_id IS NULL) ORDER BY seq");
    while (st.step()) {
      if (tags.count(st.text(1))) {
        chosen = st.text(0);
        break;
      }
    }
  }
  if (!chosen) return std::nullopt;
  Statement upd(db_,
                "UPDATE executions SET status = 'running', worker_id = ?, "
                "started_at = COALESCE(started_at, ?) WHERE id = ? AND "
                "(status = 'queued' OR (status = 'running' AND worker_id IS NULL))");
  upd.bind_all(worker_id, now, *chosen).run();
  if (upd.changes() != 1) return std::nullopt;
  Statement(db_, "UPDATE workers SET active_job = ?, last_heartbeat = ? WHERE id = ?")
      .bind_all(*chosen, now, worker_id)
      .run();
  tx.commit();
  return chosen;
}

bool Store::complete_execution(const std::string& id, const std::string& worker_id,
                               ExecutionStatus status, const nlohmann::json& results,
                               std::int64_t now) {
  if (!is_terminal(status)) throw StoreError("completion status must be terminal");
  std::lock_guard lock(mu_);
  Transaction tx(*this);
  Statement upd(db_,
                "UPDATE executions SET status = ?, results = ?, ended_at = ? "
                "WHERE id = ? AND status = 'running' AND worker_id = ?");
  upd.bind_all(status_str(status),
               status == ExecutionStatus::kSuccess ? results.dump() : std::string("{}"),
               now, id, worker_id)
      .run();
  if (upd.changes() != 1) return false;
  Statement(db_, "UPDATE workers SET active_job = NULL WHERE id = ? AND active_job = ?")
      .bind_all(worker_id, id)
      .run();
  tx.commit();
  return true;
}

bool Store::append_log(const std::string& id, const std::vector<std::string>& lines,
                       const std::optional<std::string>& worker_id, std::int64_t now) {
  std::lock_guard lock(mu_);
  Transaction tx(*this);
  {
    Statement st(db_, "SELECT status, worker_id FROM executions WHERE id = ?");
    st.bind(1, id);
    if (!st.step()) return false;
    const auto status = parse_status(st.text(0));
    if (status != ExecutionStatus::kQueued && status != ExecutionStatus::kRunning) {
      return false;
    }
    if (worker_id && st.optional_text(1) != worker_id) return false;
  }
  append_log_locked(id, lines, now);
  tx.commit();
  return true;
}

std::vector<std::string> Store::log_lines(const std::string& id, std::size_t since) {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  Statement st(db_,
               "SELECT line FROM execution_logs WHERE execution_id = ? AND seq >= ? "
               "ORDER BY seq");
  st.bind_all(id, static_cast<std::int64_t>(since));
  while (st.step()) out.push_back(st.text(0));
  return out;
}

// ---- workers -----------------------------------------------------------------

void Store::insert_worker(const WorkerRow& row) {
  std::lock_guard lock(mu_);
  Statement(db_,
            "INSERT INTO workers(id, owner, kernel_tags, registered_at, "
            "last_heartbeat, active_job) VALUES(?,?,?,?,?,?)")
      .bind_all(row.id, row.owner, nlohmann::json(row.kernel_tags).dump(),
                row.registered_at, row.last_heartbeat, row.active_job)
      .run();
}

std::optional<WorkerRow> Store::find_worker(const std::string& id) {
  std::lock_guard lock(mu_);
  Statement st(db_,
               "SELECT id, owner, kernel_tags, registered_at, last_heartbeat, "
               "active_job FROM workers WHERE id = ?");
  st.bind(1, id);
  if (!st.step()) return std::nullopt;
  WorkerRow w;
  w.id = st.text(0);
  w.owner = st.text(1);
  w.kernel_tags = nlohmann::json::parse(st.text(2)).get<std::set<std::string>>();
  w.registered_at = st.integer(3);
  w.last_heartbeat = st.integer(4);
  w.active_job = st.optional_text(5);
  return w;
}

void Store::touch_worker(const std::string& id, std::int64_t now) {
  std::lock_guard lock(mu_);
  Statement(db_, "UPDATE workers SET last_heartbeat = MAX(last_heartbeat, ?) WHERE id = ?")
      .bind_all(now, id)
      .run();
}

bool Store::live_worker_for(const std::string& tag, std::int64_t cutoff) {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT kernel_tags FROM workers WHERE last_heartbeat >= ?");
  st.bind(1, cutoff);
  while (st.step()) {
    if (nlohmann::json::parse(st.text(0)).get<std::set<std::string>>().count(tag)) {
      return true;
    }
  }
  return false;
}

std::vector<LapsedJob> Store::lapsed_jobs(std::int64_t cutoff) {
  std::lock_guard lock(mu_);
  std::vector<LapsedJob> out;
  Statement st(db_,
               "SELECT e.id, e.worker_id, e.requeues FROM executions e "
               "JOIN workers w ON w.id = e.worker_id "
               "WHERE e.status = 'running' AND w.last_heartbeat < ? ORDER BY e.seq");
  st.bind(1, cutoff);
  while (st.step()) {
    out.push_back({st.text(0), st.text(1), static_cast<int>(st.integer(2))});
  }
  return out;
}

bool Store::requeue_job(const LapsedJob& job, const std::string& log_line,
                        std::int64_t now) {
  std::lock_guard lock(mu_);
  Transaction tx(*this);
  Statement upd(db_,
                "UPDATE executions SET worker_id = NULL, requeues = requeues + 1 "
                "WHERE id = ? AND status = 'running' AND worker_id = ?");
  upd.bind_all(job.execution_id, job.worker_id).run();
  if (upd.changes() != 1) return false;
  Statement(db_, "UPDATE workers SET active_job = NULL WHERE id = ?")
      .bind_all(job.worker_id)
      .run();
  append_log_locked(job.execution_id, {log_line}, now);
  tx.commit();
  return true;
}

bool Store::fail_lapsed_job(const LapsedJob& job, const std::string& log_line,
                            std::int64_t now) {
  std::lock_guard lock(mu_);
  Transaction tx(*this);
  Statement upd(db_,
                "UPDATE executions SET status = 'error', ended_at = ? "
                "WHERE id = ? AND status = 'running' AND worker_id = ?");
  upd.bind_all(now, job.execution_id, job.worker_id).run();
  if (upd.changes() != 1) return false;
  Statement(db_, "UPDATE workers SET active_job = NULL WHERE id = ?")
      .bind_all(job.worker_id)
      .run();
  append_log_locked(job.execution_id, {log_line}, now);
  tx.commit();
  return true;
}

}  // namespace modelhub::backend
