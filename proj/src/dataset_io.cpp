#include "prizecorr/dataset_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace prizecorr {

namespace {

using nlohmann::ordered_json;

int line_of_offset(const std::string& text, std::size_t offset) {
    int line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

int line_of_key(const std::string& text, const std::string& key) {
    const std::string needle = "\"" + key + "\"";
    const std::size_t pos = text.find(needle);
    return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

[[noreturn]] void fail_key(const std::string& origin, const std::string& text,
                           const std::string& key, const std::string& what) {
    const int line = line_of_key(text, key);
    std::ostringstream msg;
    msg << origin << ":" << line << ": key \"" << key << "\": " << what;
    throw parse_error(msg.str(), key, line);
}

std::uint64_t get_uint(const ordered_json& j, const std::string& origin,
                       const std::string& text, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number_unsigned())
        fail_key(origin, text, key, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

}  // namespace

ParsedDescriptor parse_descriptor_text(const std::string& text, const std::string& origin) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::ostringstream msg;
        msg << origin << ":" << line_of_offset(text, e.byte) << ": " << e.what();
        throw parse_error(msg.str(), "", line_of_offset(text, e.byte));
    }
    if (!doc.is_object())
        throw parse_error(origin + ": descriptor must be a JSON object");

    static const std::vector<std::string> known = {
        "label",          "pool_size", "winner_count",           "observed_ranks",
        "censored_count", "notes",     "list_cutoff_rank",       "ranks_are_placeholders"};
    for (const auto& item : doc.items()) {
        bool ok = false;
        for (const auto& k : known) ok = ok || k == item.key();
        if (!ok) fail_key(origin, text, item.key(), "unknown key");
    }
    for (const char* req :
         {"label", "pool_size", "winner_count", "observed_ranks", "censored_count"}) {
        if (!doc.contains(req))
            throw parse_error(origin + ": missing required key \"" + req + "\"", req, 0);
    }

    ParsedDescriptor out;
    PrizeDataset& ds = out.dataset;

    if (!doc["label"].is_string()) fail_key(origin, text, "label", "expected a string");
    ds.label = doc["label"].get<std::string>();
    ds.pool_size = get_uint(doc, origin, text, "pool_size");
    ds.winner_count = get_uint(doc, origin, text, "winner_count");
    ds.censored_count = get_uint(doc, origin, text, "censored_count");

    if (!doc["observed_ranks"].is_array())
        fail_key(origin, text, "observed_ranks", "expected an array of ranks");
    for (const auto& v : doc["observed_ranks"]) {
        if (!v.is_number_unsigned())
            fail_key(origin, text, "observed_ranks", "ranks must be positive integers");
        ds.observed_ranks.push_back(v.get<std::uint64_t>());
    }

    if (doc.contains("list_cutoff_rank"))
        ds.list_cutoff_rank = get_uint(doc, origin, text, "list_cutoff_rank");
    if (doc.contains("notes")) {
        if (!doc["notes"].is_string()) fail_key(origin, text, "notes", "expected a string");
        out.notes = doc["notes"].get<std::string>();
    }
    if (doc.contains("ranks_are_placeholders")) {
        if (!doc["ranks_are_placeholders"].is_boolean())
            fail_key(origin, text, "ranks_are_placeholders", "expected a boolean");
        out.ranks_are_placeholders = doc["ranks_are_placeholders"].get<bool>();
    }

    try {
        validate(ds);
    } catch (const data_error& e) {
        throw parse_error(origin + ": " + e.what());
    }

    if (out.ranks_are_placeholders && !ds.observed_ranks.empty())
        out.warnings.push_back(
            "observed_ranks are placeholders, not extracted data; likelihood-based "
            "estimates (mle/posterior) will not be meaningful until real ranks are "
            "substituted");
    return out;
}

ParsedDescriptor parse_descriptor(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open descriptor file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_descriptor_text(buf.str(), path.string());
}

std::string serialize_descriptor(const PrizeDataset& ds, const std::string& notes,
                                 bool ranks_are_placeholders) {
    ordered_json doc;
    doc["label"] = ds.label;
    doc["pool_size"] = ds.pool_size;
    doc["winner_count"] = ds.winner_count;
    doc["observed_ranks"] = ds.observed_ranks;
    doc["censored_count"] = ds.censored_count;
    if (ds.list_cutoff_rank) doc["list_cutoff_rank"] = *ds.list_cutoff_rank;
    if (ranks_are_placeholders) doc["ranks_are_placeholders"] = true;
    if (!notes.empty()) doc["notes"] = notes;
    return doc.dump(2) + "\n";
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace prizecorr
