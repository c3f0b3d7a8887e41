#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "httplib.h"

#include "ghpaudit/memento.hpp"

using namespace ghpaudit;
namespace fs = std::filesystem;

namespace {

Timestamp ts(int y, unsigned m, unsigned d, int hh = 0, int mm = 0, int ss = 0) {
    return at_midnight_utc(make_date(y, m, d)) + std::chrono::hours(hh) +
           std::chrono::minutes(mm) + std::chrono::seconds(ss);
}

const char* kTimeMapBody =
    "<http://example.com/repo>; rel=\"original\",\n"
    "<http://arch-a.test/tm/http://example.com/repo>; rel=\"self\"; "
    "type=\"application/link-format\"; from=\"Tue, 20 Jun 2017 09:00:00 GMT\",\n"
    "<http://arch-a.test/m/20170620090000/http://example.com/repo>; rel=\"first memento\"; "
    "datetime=\"Tue, 20 Jun 2017 09:00:00 GMT\",\n"
    "<http://arch-a.test/m/20180105120000/http://example.com/repo>; rel=\"memento\"; "
    "datetime=\"Fri, 05 Jan 2018 12:00:00 GMT\",\n"
    "<http://arch-a.test/m/20190301000000/http://example.com/repo>; rel=\"last memento\"; "
    "datetime=\"Fri, 01 Mar 2019 00:00:00 GMT\"";

}  // namespace

TEST_CASE("link-format TimeMap parses into entries with rel sets") {
    LinkParseResult links = parse_link_format(kTimeMapBody);
    CHECK_FALSE(links.failed);
    CHECK(links.warnings.empty());
    REQUIRE(links.entries.size() == 5);

    CHECK(links.entries[0].uri == "http://example.com/repo");
    CHECK(links.entries[0].rels == std::set<std::string>{"original"});

    CHECK(links.entries[1].rels == std::set<std::string>{"self"});
    CHECK(links.entries[1].attributes.at("type") == "application/link-format");
    CHECK(links.entries[1].attributes.at("from") == "Tue, 20 Jun 2017 09:00:00 GMT");

    // multi-token rel values become sets
    CHECK(links.entries[2].rels == std::set<std::string>{"first", "memento"});
    CHECK(links.entries[4].rels == std::set<std::string>{"last", "memento"});
}

TEST_CASE("extraction keeps only memento rels and parses their datetimes") {
    auto mementos = extract_mementos(parse_link_format(kTimeMapBody), "a");
    REQUIRE(mementos.size() == 3);
    CHECK(mementos[0].archive_id == "a");
    CHECK(mementos[0].uri_m == "http://arch-a.test/m/20170620090000/http://example.com/repo");
    CHECK(mementos[0].memento_datetime == ts(2017, 6, 20, 9));
    CHECK(mementos[1].memento_datetime == ts(2018, 1, 5, 12));
    CHECK(mementos[2].memento_datetime == ts(2019, 3, 1));
}

TEST_CASE("an archive holding exactly one capture uses a combined rel") {
    // Single-capture TimeMaps mark one URI-M as first, last, and memento.
    auto links = parse_link_format(
        "<http://a.test/m/1/x>; rel=\"first last memento\"; "
        "datetime=\"Tue, 20 Jun 2017 09:00:00 GMT\"");
    REQUIRE(links.entries.size() == 1);
    CHECK(links.entries[0].rels == std::set<std::string>{"first", "last", "memento"});
    auto mementos = extract_mementos(links, "a");
    REQUIRE(mementos.size() == 1);
    CHECK(mementos[0].memento_datetime == ts(2017, 6, 20, 9));
}

TEST_CASE("angle brackets and quotes protect separators") {
    auto links = parse_link_format(
        "<http://a.test/m/1/x,y>; rel=\"memento\"; datetime=\"Tue, 20 Jun 2017 09:00:00 GMT\",\n"
        "<http://a.test/m/2/z>; rel=\"memento\"; datetime=\"Fri, 05 Jan 2018 12:00:00 GMT\"; "
        "note=\"semi;colon, comma\"");
    REQUIRE(links.entries.size() == 2);
    CHECK(links.entries[0].uri == "http://a.test/m/1/x,y");
    CHECK(links.entries[1].attributes.at("note") == "semi;colon, comma");
}

TEST_CASE("malformed entries are skipped with warnings; empty bodies are not failures") {
    auto links = parse_link_format(
        "garbage without angle uri; rel=\"memento\",\n"
        "<http://a.test/ok>; rel=\"memento\"; datetime=\"Tue, 20 Jun 2017 09:00:00 GMT\"");
    CHECK_FALSE(links.failed);
    CHECK(links.warnings.size() == 1);
    REQUIRE(links.entries.size() == 1);

    auto all_bad = parse_link_format("no links here at all; just = text");
    CHECK(all_bad.failed);
    CHECK(all_bad.entries.empty());

    auto empty = parse_link_format("   \n  ");
    CHECK_FALSE(empty.failed);
    CHECK(empty.entries.empty());
}

TEST_CASE("extraction skips bad datetimes and collapses in-archive duplicates") {
    auto links = parse_link_format(
        "<http://a.test/m/1/x>; rel=\"memento\"; datetime=\"Tue, 20 Jun 2017 09:00:00 GMT\",\n"
        "<http://a.test/m/1/x>; rel=\"memento\"; datetime=\"Tue, 20 Jun 2017 09:00:00 GMT\",\n"
        "<http://a.test/m/2/x>; rel=\"memento\"; datetime=\"not a date\",\n"
        "<http://a.test/m/3/x>; rel=\"memento\"");
    auto mementos = extract_mementos(links, "a");
    CHECK(mementos.size() == 1);  // duplicate collapsed, bad/missing datetime skipped
}

TEST_CASE("merge summarizes across archives without cross-archive deduplication") {
    std::vector<Memento> a = {{"a", "http://a/m/1", ts(2017, 6, 20, 9)},
                              {"a", "http://a/m/2", ts(2019, 3, 1)}};
    std::vector<Memento> b = {{"b", "http://b/m/1", ts(2016, 1, 1)},
                              // same instant as one of a's captures: both kept
                              {"b", "http://b/m/2", ts(2019, 3, 1)}};
    std::vector<std::pair<std::string, std::vector<Memento>>> per_archive = {{"a", a}, {"b", b}, {"c", {}}};

    TimeMapSummary merged = merge_timemaps("http://example.com/repo", per_archive,
                                           {{"d", "timeout"}}, 4);

    CHECK(merged.uri_r == "http://example.com/repo");
    CHECK(merged.memento_count == 4);
    CHECK(merged.first_memento == ts(2016, 1, 1));
    CHECK(merged.last_memento == ts(2019, 3, 1));
    CHECK(merged.per_archive_counts.at("a") == 2);
    CHECK(merged.per_archive_counts.at("b") == 2);
    CHECK(merged.per_archive_counts.at("c") == 0);
    CHECK(merged.queried_archives == 4);
    REQUIRE(merged.failed_archives.size() == 1);
    CHECK(merged.failed_archives[0].archive_id == "d");
    CHECK_FALSE(merged.all_failed());
    CHECK(std::is_sorted(merged.mementos.begin(), merged.mementos.end(),
                         [](const Memento& x, const Memento& y) {
                             return x.memento_datetime < y.memento_datetime ||
                                    (x.memento_datetime == y.memento_datetime &&
                                     x.archive_id < y.archive_id);
                         }));

    SUBCASE("permutation of the input order changes nothing") {
        std::vector<std::pair<std::string, std::vector<Memento>>> flipped = {{"c", {}}, {"b", b}, {"a", a}};
        TimeMapSummary again = merge_timemaps("http://example.com/repo", flipped,
                                              {{"d", "timeout"}}, 4);
        CHECK(again.memento_count == merged.memento_count);
        CHECK(again.first_memento == merged.first_memento);
        CHECK(again.last_memento == merged.last_memento);
        CHECK(again.per_archive_counts == merged.per_archive_counts);
        REQUIRE(again.mementos.size() == merged.mementos.size());
        for (std::size_t i = 0; i < merged.mementos.size(); ++i) {
            CHECK(again.mementos[i].uri_m == merged.mementos[i].uri_m);
            CHECK(again.mementos[i].archive_id == merged.mementos[i].archive_id);
            CHECK(again.mementos[i].memento_datetime == merged.mementos[i].memento_datetime);
        }
    }

    SUBCASE("coverage is unknowable only when every archive failed") {
        TimeMapSummary all_down = merge_timemaps("u", {}, {{"a", "timeout"}, {"b", "dns"}}, 2);
        CHECK(all_down.all_failed());
        CHECK(all_down.memento_count == 0);

        TimeMapSummary none_queried = merge_timemaps("u", {}, {}, 0);
        CHECK_FALSE(none_queried.all_failed());
    }
}

TEST_CASE("the default registry has twelve archives with usable templates") {
    const auto& registry = default_archive_registry();
    REQUIRE(registry.size() == 12);
    std::set<std::string> ids;
    for (const auto& endpoint : registry) {
        CAPTURE(endpoint.id);
        CHECK(ids.insert(endpoint.id).second);  // unique ids
        CHECK_FALSE(endpoint.display_name.empty());
        auto at = endpoint.timemap_template.find("{uri}");
        REQUIRE(at != std::string::npos);
        CHECK(endpoint.timemap_template.find("{uri}", at + 1) == std::string::npos);
    }
    CHECK(ids.count("ia") == 1);

    CHECK(expand_template(registry.front(), "http://example.com/x") ==
          "https://web.archive.org/web/timemap/link/http://example.com/x");
}

TEST_CASE("registry files load with comments skipped and malformed lines rejected") {
    auto dir = fs::temp_directory_path() / "ghpaudit_memento_tests";
    fs::create_directories(dir);

    auto write = [&](const char* name, const std::string& body) {
        auto path = dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << body;
        return path;
    };

    auto good = write("registry.tsv",
                      "# comment line\n"
                      "\n"
                      "ia\tInternet Archive\thttps://web.archive.org/web/timemap/link/{uri}\n"
                      "lab\tLab Archive\thttp://127.0.0.1:9/tm/{uri}\n");
    auto registry = load_archive_registry(good);
    REQUIRE(registry.size() == 2);
    CHECK(registry[0].id == "ia");
    CHECK(registry[1].display_name == "Lab Archive");
    CHECK(expand_template(registry[1], "X") == "http://127.0.0.1:9/tm/X");

    CHECK_THROWS_AS(load_archive_registry(write("short.tsv", "ia\tonly-two-fields\n")),
                    std::runtime_error);
    CHECK_THROWS_AS(load_archive_registry(write("noslot.tsv", "ia\tIA\thttps://no-slot.test/tm\n")),
                    std::runtime_error);
    CHECK_THROWS_AS(load_archive_registry(write("empty.tsv", "# nothing but comments\n")),
                    std::runtime_error);
    CHECK_THROWS_AS(load_archive_registry(dir / "missing.tsv"), std::runtime_error);
}

TEST_CASE("aggregation tolerates per-archive failures and caches only successes") {
    httplib::Server server;
    server.Get(R"(/tm/good/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kTimeMapBody, "application/link-format");
    });
    server.Get(R"(/tm/empty/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.status = 404;
    });
    server.Get(R"(/tm/err/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.status = 500;
    });
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server_thread([&server] { server.listen_after_bind(); });
    server.wait_until_ready();

    std::string base = "http://127.0.0.1:" + std::to_string(port);
    std::vector<ArchiveEndpoint> registry = {
        {"good", "Good Archive", base + "/tm/good/{uri}"},
        {"empty", "Empty Archive", base + "/tm/empty/{uri}"},
        {"err", "Broken Archive", base + "/tm/err/{uri}"},
        {"down", "Unreachable Archive", "http://127.0.0.1:1/tm/{uri}"},
    };

    HttpOptions opts;
    opts.timeout_ms = 2000;
    opts.retries = 0;
    opts.backoff_base_ms = 1;

    auto cache_dir = fs::temp_directory_path() / "ghpaudit_memento_cache";
    fs::remove_all(cache_dir);
    auto cache = ObservationCache::open(cache_dir);

    HttpEngine engine(opts);
    TimeMapSummary first = aggregate("http://example.com/repo", registry, engine, cache);
    CHECK(engine.requests_made() == 4);

    CHECK(first.memento_count == 3);
    CHECK(first.per_archive_counts.at("good") == 3);
    CHECK(first.per_archive_counts.at("empty") == 0);
    CHECK(first.first_memento == ts(2017, 6, 20, 9));
    CHECK(first.last_memento == ts(2019, 3, 1));
    CHECK(first.queried_archives == 4);
    REQUIRE(first.failed_archives.size() == 2);
    CHECK(first.failed_archives[0].archive_id == "down");
    CHECK(first.failed_archives[0].error_class == "connection");
    CHECK(first.failed_archives[1].archive_id == "err");
    CHECK(first.failed_archives[1].error_class == "http_500");
    CHECK_FALSE(first.all_failed());

    // Good and empty (404) responses are cached; failures are not, so a
    // rerun re-queries only the archives that failed.
    CHECK(cache->size() == 2);
    HttpEngine engine2(opts);
    TimeMapSummary second = aggregate("http://example.com/repo", registry, engine2, cache);
    CHECK(engine2.requests_made() == 2);
    CHECK(second.memento_count == first.memento_count);
    CHECK(second.per_archive_counts == first.per_archive_counts);
    CHECK(second.failed_archives.size() == 2);

    server.stop();
    server_thread.join();
}
