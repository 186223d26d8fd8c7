/*
 * Copyright 2026 The yanc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

#include "yanc/fs.hpp"
#include "yanc/remote/remote.hpp"

using namespace yanc;
using namespace std::chrono_literals;

namespace {

struct Served {
    store::Store store;
    schema::Netfs net{store};
    remote::StoreServer server{net};
    std::string endpoint;

    Served()
    {
        auto port = server.start();
        REQUIRE(port.ok());
        endpoint = "127.0.0.1:" + std::to_string(port.value());
    }
};

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& cmd)
{
    std::string out_file = "/tmp/yanc_cli_out_" + std::to_string(getpid());
    std::string err_file = "/tmp/yanc_cli_err_" + std::to_string(getpid());
    int rc = std::system((cmd + " >" + out_file + " 2>" + err_file).c_str());
    RunResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    std::remove(out_file.c_str());
    std::remove(err_file.c_str());
    return r;
}

std::string tool(const char* name)
{
    return std::string(TOOL_DIR) + "/" + name;
}

pid_t spawn(const std::vector<std::string>& args)
{
    pid_t pid = fork();
    if (pid == 0) {
        std::vector<char*> argv;
        for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
        argv.push_back(nullptr);
        // silence the daemons
        if (!freopen("/dev/null", "w", stdout)) _exit(126);
        if (!freopen("/dev/null", "w", stderr)) _exit(126);
        execv(argv[0], argv.data());
        _exit(127);
    }
    return pid;
}

void reap(pid_t pid)
{
    if (pid <= 0) return;
    kill(pid, SIGKILL);
    waitpid(pid, nullptr, 0);
}

constexpr const char* kSw = "/net/switches/00000000000000a1";

}  // namespace

TEST_CASE("remote client mirrors the local surface")
{
    Served s;
    auto fs = remote::RemoteFs::connect(s.endpoint, "remote-test");
    REQUIRE(fs.ok());
    Fs& r = *fs.value();

    // semantic mkdir over the wire
    REQUIRE(r.mkdir(kSw).ok());
    auto kids = r.list(kSw);
    REQUIRE(kids.ok());
    CHECK(kids.value() == std::vector<std::string>{"events", "flows", "packets_out", "ports"});
    CHECK(r.mkdir("/net/switches/nope").error() == Errc::invalid_name);

    // binary-safe writes
    std::string blob("\x00\x01\xfftail", 7);
    REQUIRE(r.write("/net/hosts/blob", blob).ok());
    CHECK(r.read("/net/hosts/blob").value() == blob);
    CHECK(r.read("/net/hosts/missing").error() == Errc::not_found);

    auto info = r.stat("/net/hosts/blob");
    REQUIRE(info.ok());
    CHECK(info.value().kind == store::NodeKind::file);
    CHECK(info.value().size == blob.size());
    CHECK(info.value().owner == "remote-test");

    // links, renames, removals
    REQUIRE(r.symlink("/net/hosts/ln", "/net/hosts/blob").ok());
    CHECK(r.readlink("/net/hosts/ln").value() == "/net/hosts/blob");
    REQUIRE(r.rename("/net/hosts/blob", "/net/hosts/blob2").ok());
    CHECK(r.read("/net/hosts/ln").error() == Errc::dangling_link);
    REQUIRE(r.remove("/net/hosts/ln", false).ok());

    // the flow protocol end to end
    std::string flow = std::string(kSw) + "/flows/f";
    REQUIRE(r.mkdir(flow).ok());
    REQUIRE(r.write(flow + "/match.nw_src", "10.0.0.0/24").ok());
    CHECK(r.write(flow + "/match.nw_src", "300.0.0.0/24").error() == Errc::parse_error);
    auto v = r.commit_flow(flow);
    REQUIRE(v.ok());
    CHECK(v.value() == 1);
    auto img = r.committed_flow(flow);
    REQUIRE(img.ok());
    CHECK(img.value().version == 1);
    CHECK(img.value().match.nw_src == Cidr{0x0a000000, 24});

    // watches stream events over the connection
    auto w = r.watch(std::string(kSw) + "/flows", true, 128);
    REQUIRE(w.ok());
    REQUIRE(r.write(flow + "/match.tp_dst", "22").ok());
    auto ev = w.value()->next(2000ms);
    REQUIRE(ev.has_value());
    CHECK(ev->kind == store::EventKind::created);
    CHECK(ev->path == flow + "/match.tp_dst");

    // buffers
    auto buf = r.open_event_buffer(kSw, "app");
    REQUIRE(buf.ok());
    schema::EventIn in;
    in.in_port = 4;
    in.data = "datadata";
    in.total_len = 8;
    REQUIRE(r.enqueue_event(kSw, in).ok());
    auto records = r.list(buf.value());
    REQUIRE(records.ok());
    REQUIRE(records.value().size() == 1);
    CHECK(r.read(buf.value() + "/" + records.value()[0] + "/data").value() == "datadata");
    REQUIRE(r.ack_event(buf.value() + "/" + records.value()[0]).ok());
    CHECK(r.list(buf.value()).value().empty());

    REQUIRE(r.rm_semantic(flow).ok());
    CHECK(r.committed_flow(flow).error() == Errc::not_found);
}

TEST_CASE("yanctl mirrors file operations with distinct exit codes")
{
    Served s;
    std::string base = tool("yanctl") + " --mount " + s.endpoint + " ";

    CHECK(run(base + "ls /net").out == "hosts\nswitches\nviews\n");
    CHECK(run(base + "mkdir " + kSw).code == 0);
    CHECK(run(base + "ls " + kSw).out == "events\nflows\npackets_out\nports\n");

    CHECK(run(base + "write /net/hosts/note hello").code == 0);
    auto cat = run(base + "cat /net/hosts/note");
    CHECK(cat.code == 0);
    CHECK(cat.out == "hello");
    CHECK(run(base + "cat /net/hosts/enoent").code == 1);

    CHECK(run(base + "ln /net/hosts/l /net/hosts/note").code == 0);
    CHECK(run(base + "readlink /net/hosts/l").out == "/net/hosts/note\n");

    auto st = run(base + "stat /net/hosts/note");
    CHECK(st.code == 0);
    CHECK(st.out.find("kind\tfile") != std::string::npos);

    CHECK(run(base + "rm /net/hosts/note").code == 0);
    CHECK(run(base + "rm /net/hosts/note").code == 1);
    CHECK(run(base + "rm /net").code == 4);  // structure is protected

    // a local daemon sees a CLI write as an ordered event
    LocalFs local(s.net, "observer");
    auto w = local.watch("/net/hosts", false, 16).value();
    CHECK(run(base + "write /net/hosts/seen 1").code == 0);
    auto ev = w->next(2000ms);
    REQUIRE(ev.has_value());
    CHECK(ev->path == "/net/hosts/seen");

    // unreachable store
    CHECK(run(tool("yanctl") + std::string(" --mount 127.0.0.1:1 ls /net")).code == 3);
}

TEST_CASE("yanctl watch streams events")
{
    Served s;
    std::string out_file = "/tmp/yanc_watch_" + std::to_string(getpid());
    pid_t watcher = fork();
    if (watcher == 0) {
        if (!freopen(out_file.c_str(), "w", stdout)) _exit(126);
        std::string prog = tool("yanctl");
        execl(prog.c_str(), prog.c_str(), "--mount", s.endpoint.c_str(), "watch", "/net/hosts",
              "-r", "-n", "1", "--timeout-ms", "5000", nullptr);
        _exit(127);
    }
    REQUIRE(watcher > 0);
    std::this_thread::sleep_for(300ms);  // let the watch register

    LocalFs local(s.net, "writer");
    REQUIRE(local.write("/net/hosts/ping", "x").ok());

    int status = 0;
    REQUIRE(waitpid(watcher, &status, 0) == watcher);
    CHECK(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    auto out = slurp(out_file);
    CHECK(out.find("created\t/net/hosts/ping") != std::string::npos);
    std::remove(out_file.c_str());
}

TEST_CASE("flowctl stages, commits, lists and deletes flows")
{
    Served s;
    LocalFs local(s.net, "prep");
    REQUIRE(local.mkdir(kSw).ok());
    std::string base = tool("flowctl") + " --mount " + s.endpoint + " ";

    auto add = run(base +
                   "add 00000000000000a1 ssh-block match.tp_dst=22 match.dl_type=0x0800 "
                   "match.nw_proto=6 priority=40000");
    CHECK(add.code == 0);
    auto img = local.committed_flow(std::string(kSw) + "/flows/ssh-block");
    REQUIRE(img.ok());
    CHECK(img.value().priority == 40000);
    CHECK(img.value().match.tp_dst == uint16_t(22));
    CHECK(img.value().actions.empty());  // no action files: a drop rule

    // shorter hex ids normalize to the directory name
    CHECK(run(base + "add a1 fwd match.in_port=1 action.0.output=2").code == 0);

    // validation failures name the offending field and exit 2
    auto bad = run(base + "add 00000000000000a1 f match.nw_src=300.1.1.1/24");
    CHECK(bad.code == 2);
    CHECK(bad.err.find("match.nw_src") != std::string::npos);

    auto listed = run(base + "list 00000000000000a1");
    CHECK(listed.code == 0);
    CHECK(listed.out.find("ssh-block\t40000") != std::string::npos);
    CHECK(listed.out.find("drop") != std::string::npos);
    CHECK(listed.out.find("fwd\t32768") != std::string::npos);

    CHECK(run(base + "del 00000000000000a1 ssh-block").code == 0);
    CHECK(run(base + "del 00000000000000a1 ssh-block").code == 1);
    CHECK(run(base + "add zz f").code == 1);                      // no such switch
    CHECK(run(tool("flowctl") + std::string(" --mount 127.0.0.1:1 list a1")).code == 3);
}

TEST_CASE("viewctl defines, lists and tears down slices")
{
    Served s;
    LocalFs local(s.net, "prep");
    REQUIRE(local.mkdir(kSw).ok());
    std::string base = tool("viewctl") + " --mount " + s.endpoint + " ";

    auto define = run(base + "define ssh --member 00000000000000a1 --match tp_dst=22 "
                             "--match nw_proto=6 --match dl_type=0x0800");
    CHECK(define.code == 0);
    CHECK(local.stat("/net/views/ssh/.slice/members").ok());

    auto listed = run(base + "list");
    CHECK(listed.code == 0);
    CHECK(listed.out.find("/net/views/ssh\t00000000000000a1\t") != std::string::npos);
    CHECK(listed.out.find("tp_dst=22") != std::string::npos);

    CHECK(run(base + "define bad --member ffffffffffffffff").code == 2);  // unknown member
    CHECK(run(base + "teardown ssh").code == 0);
    CHECK(run(base + "teardown ssh").code == 1);
}

TEST_CASE("daemon binaries drive a live fabric over tcp")
{
    // ports derived from the pid to keep parallel test runs apart
    uint16_t of_port = uint16_t(20000 + getpid() % 20000);
    uint16_t store_port = of_port + 1;
    std::string of_ep = "127.0.0.1:" + std::to_string(of_port);
    std::string store_ep = "127.0.0.1:" + std::to_string(store_port);

    std::string topo_file = "/tmp/yanc_topo_" + std::to_string(getpid());
    std::ofstream(topo_file) << "switch a1 ports=2\nswitch b2 ports=2\nlink a1:2 b2:1\n";

    pid_t yancd = spawn({tool("yancd"), "--listen", of_ep, "--store-listen", store_ep,
                         "--log-level", "quiet"});
    REQUIRE(yancd > 0);

    // wait for the store service to come up
    std::unique_ptr<remote::RemoteFs> fs;
    for (int i = 0; i < 100 && !fs; ++i) {
        std::this_thread::sleep_for(50ms);
        auto attempt = remote::RemoteFs::connect(store_ep, "test");
        if (attempt) fs = std::move(attempt.value());
    }
    REQUIRE(fs != nullptr);

    pid_t simfab = spawn({tool("simfab"), "--topo", topo_file, "--connect", of_ep});
    REQUIRE(simfab > 0);

    // switches materialize once the handshake completes
    bool up = false;
    for (int i = 0; i < 100 && !up; ++i) {
        std::this_thread::sleep_for(50ms);
        auto names = fs->list("/net/switches");
        up = names.ok() && names.value().size() == 2;
    }
    REQUIRE(up);
    CHECK(fs->read("/net/switches/00000000000000a1/status").value() == "connected");
    CHECK(fs->list("/net/switches/00000000000000a1/ports").value() ==
          std::vector<std::string>{"1", "2"});

    // flowctl pushes a flow through the running daemon
    auto add = run(tool("flowctl") + " --mount " + store_ep +
                   " add a1 probe match.in_port=1 action.0.output=2");
    CHECK(add.code == 0);

    // topod discovers the one link within a few rounds
    auto topod = run(tool("topod") + " --mount " + store_ep + " --interval 100 --rounds 4");
    CHECK(topod.code == 0);
    auto peer = fs->readlink("/net/switches/00000000000000a1/ports/2/peer");
    REQUIRE(peer.ok());
    CHECK(peer.value() == "/net/switches/00000000000000b2/ports/1");

    reap(simfab);
    reap(yancd);
    std::remove(topo_file.c_str());
}
