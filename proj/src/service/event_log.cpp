#include "curricula/service/event_log.hpp"

#include <charconv>

#include "curricula/error.hpp"
#include "curricula/service/serialize.hpp"

namespace curricula::service {

nlohmann::json event_to_json(const Event& e) {
  return {{"seq", e.seq},
          {"timestamp", format_time(e.timestamp)},
          {"actor", e.actor},
          {"type", e.type},
          {"payload", e.payload}};
}

Event event_from_json(const nlohmann::json& j) {
  Event e;
  e.seq = j.at("seq").get<long>();
  e.timestamp = parse_time(j.at("timestamp").get<std::string>());
  e.actor = j.at("actor").get<std::string>();
  e.type = j.at("type").get<std::string>();
  e.payload = j.at("payload");
  return e;
}

void write_record(std::ostream& out, const Event& event) {
  const std::string body = event_to_json(event).dump();
  out << body.size() << '\n' << body << '\n';
}

std::vector<Event> read_records(std::istream& in, long first_seq) {
  std::vector<Event> out;
  long expected = first_seq;
  auto corrupt = [&](const std::string& why) {
    return Error(ErrorCode::CorruptLog, "seq " + std::to_string(expected) + ": " + why);
  };
  while (true) {
    std::string header;
    if (!std::getline(in, header)) {
      if (!header.empty()) throw corrupt("truncated length header");
      break;
    }
    if (in.eof()) throw corrupt("truncated length header");
    std::size_t length = 0;
    const auto [ptr, ec] = std::from_chars(header.data(), header.data() + header.size(), length);
    if (header.empty() || ec != std::errc{} || ptr != header.data() + header.size())
      throw corrupt("bad length header '" + header + "'");
    std::string body(length, '\0');
    in.read(body.data(), static_cast<std::streamsize>(length));
    if (static_cast<std::size_t>(in.gcount()) != length) throw corrupt("truncated record");
    if (in.get() != '\n') throw corrupt("missing record terminator");
    Event e;
    try {
      e = event_from_json(nlohmann::json::parse(body));
    } catch (const nlohmann::json::exception& ex) {
      throw corrupt(ex.what());
    } catch (const Error& ex) {
      throw corrupt(ex.what());
    }
    if (e.seq != expected) throw corrupt("found seq " + std::to_string(e.seq));
    out.push_back(std::move(e));
    ++expected;
  }
  return out;
}

std::vector<Event> read_log_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  return read_records(in);
}

EventLog::EventLog(const std::filesystem::path& path) : path_(path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  events_ = read_log_file(path);
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw Error(ErrorCode::CorruptLog, "cannot open " + path.string() + " for append");
}

const Event& EventLog::append(core::Timestamp timestamp, std::string actor, std::string type,
                              nlohmann::json payload) {
  Event e{last_seq() + 1, timestamp, std::move(actor), std::move(type), std::move(payload)};
  if (path_) {
    write_record(out_, e);
    out_.flush();
    if (!out_) throw Error(ErrorCode::CorruptLog, "write failed at seq " + std::to_string(e.seq));
  }
  events_.push_back(std::move(e));
  return events_.back();
}

}  // namespace curricula::service
