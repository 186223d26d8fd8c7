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

// yancmount: exposes the store through the OS so ls, cat, grep and shell
// redirection work on the network tree directly. A strict pass-through:
// every OS call maps 1:1 onto a store operation and nothing is cached,
// except that partial-offset writes buffer per open handle and apply
// atomically on close (the store has whole-file writes only).
//
//   yancmount --mountpoint /net --store 127.0.0.1:7070 [--read-only]

#define FUSE_USE_VERSION 31

#include <fuse3/fuse.h>

#include <CLI11.hpp>
#include <cerrno>
#include <cstring>
#include <map>
#include <mutex>

#include "yanc/remote/remote.hpp"
#include "yanc/store/store.hpp"

using namespace yanc;

namespace {

struct MountState {
    std::unique_ptr<remote::RemoteFs> fs;
    bool read_only = false;
    std::mutex mu;
    uint64_t next_handle = 1;
    struct Handle {
        std::string path;
        std::string content;
        bool dirty = false;
    };
    std::map<uint64_t, Handle> handles;
};

MountState* state()
{
    return static_cast<MountState*>(fuse_get_context()->private_data);
}

int errno_for(Errc e)
{
    switch (e) {
        case Errc::ok: return 0;
        case Errc::not_found:
        case Errc::dangling_link: return -ENOENT;
        case Errc::not_a_directory: return -ENOTDIR;
        case Errc::is_a_directory: return -EISDIR;
        case Errc::already_exists: return -EEXIST;
        case Errc::permission_denied: return -EACCES;
        case Errc::directory_not_empty: return -ENOTEMPTY;
        case Errc::loop_detected: return -ELOOP;
        case Errc::not_a_link:
        case Errc::invalid_name:
        case Errc::parse_error:
        case Errc::range_error:
        case Errc::unknown_field:
        case Errc::validation_failed:
        case Errc::not_a_schema_point: return -EINVAL;
        default: return -EIO;
    }
}

int op_getattr(const char* path, struct stat* st, struct fuse_file_info*)
{
    auto info = state()->fs->stat(path);
    if (!info) return errno_for(info.error());
    std::memset(st, 0, sizeof *st);
    st->st_mode = info.value().mode;
    switch (info.value().kind) {
        case store::NodeKind::directory:
            st->st_mode |= S_IFDIR;
            st->st_nlink = 2;
            break;
        case store::NodeKind::file:
            st->st_mode |= S_IFREG;
            st->st_nlink = 1;
            st->st_size = off_t(info.value().size);
            break;
        case store::NodeKind::symlink:
            st->st_mode |= S_IFLNK;
            st->st_nlink = 1;
            st->st_size = off_t(info.value().size);
            break;
    }
    st->st_mtime = time_t(info.value().mtime);  // logical counter, not wall clock
    return 0;
}

int op_readdir(const char* path, void* buf, fuse_fill_dir_t fill, off_t,
               struct fuse_file_info*, enum fuse_readdir_flags)
{
    auto names = state()->fs->list(path);
    if (!names) return errno_for(names.error());
    fill(buf, ".", nullptr, 0, fuse_fill_dir_flags(0));
    fill(buf, "..", nullptr, 0, fuse_fill_dir_flags(0));
    for (const auto& n : names.value()) fill(buf, n.c_str(), nullptr, 0, fuse_fill_dir_flags(0));
    return 0;
}

int op_mkdir(const char* path, mode_t)
{
    if (state()->read_only) return -EROFS;
    Status st = state()->fs->mkdir(path);
    return st ? 0 : errno_for(st.error());
}

int op_rmdir(const char* path)
{
    if (state()->read_only) return -EROFS;
    // typed objects remove their subtree on their own
    Status st = state()->fs->remove(path, false);
    return st ? 0 : errno_for(st.error());
}

int op_unlink(const char* path)
{
    if (state()->read_only) return -EROFS;
    Status st = state()->fs->remove(path, false);
    return st ? 0 : errno_for(st.error());
}

int op_symlink(const char* target, const char* linkpath)
{
    if (state()->read_only) return -EROFS;
    Status st = state()->fs->symlink(linkpath, target);
    return st ? 0 : errno_for(st.error());
}

int op_readlink(const char* path, char* buf, size_t size)
{
    auto target = state()->fs->readlink(path);
    if (!target) return errno_for(target.error());
    std::snprintf(buf, size, "%s", target.value().c_str());
    return 0;
}

int op_rename(const char* from, const char* to, unsigned int)
{
    if (state()->read_only) return -EROFS;
    Status st = state()->fs->rename(from, to);
    return st ? 0 : errno_for(st.error());
}

int open_handle(const char* path, struct fuse_file_info* fi, bool fresh)
{
    MountState* s = state();
    MountState::Handle h;
    h.path = path;
    if (!fresh) {
        auto content = s->fs->read(path);
        if (!content) return errno_for(content.error());
        h.content = std::move(content.value());
    }
    if (fi->flags & O_TRUNC) {
        h.content.clear();
        h.dirty = true;
    }
    std::lock_guard lk(s->mu);
    uint64_t id = s->next_handle++;
    s->handles[id] = std::move(h);
    fi->fh = id;
    return 0;
}

int op_create(const char* path, mode_t, struct fuse_file_info* fi)
{
    if (state()->read_only) return -EROFS;
    Status st = state()->fs->mkfile(path);
    if (!st && st.error() != Errc::already_exists) return errno_for(st.error());
    return open_handle(path, fi, st.ok());
}

int op_open(const char* path, struct fuse_file_info* fi)
{
    if ((fi->flags & (O_WRONLY | O_RDWR)) && state()->read_only) return -EROFS;
    return open_handle(path, fi, false);
}

int op_read(const char*, char* buf, size_t size, off_t offset, struct fuse_file_info* fi)
{
    MountState* s = state();
    std::lock_guard lk(s->mu);
    auto it = s->handles.find(fi->fh);
    if (it == s->handles.end()) return -EBADF;
    const std::string& content = it->second.content;
    if (offset >= off_t(content.size())) return 0;
    size_t n = std::min(size, content.size() - size_t(offset));
    std::memcpy(buf, content.data() + offset, n);
    return int(n);
}

int op_write(const char*, const char* buf, size_t size, off_t offset, struct fuse_file_info* fi)
{
    MountState* s = state();
    if (s->read_only) return -EROFS;
    std::lock_guard lk(s->mu);
    auto it = s->handles.find(fi->fh);
    if (it == s->handles.end()) return -EBADF;
    std::string& content = it->second.content;
    if (content.size() < size_t(offset) + size) content.resize(size_t(offset) + size, '\0');
    std::memcpy(content.data() + offset, buf, size);
    it->second.dirty = true;
    return int(size);
}

int op_truncate(const char* path, off_t size, struct fuse_file_info* fi)
{
    MountState* s = state();
    if (s->read_only) return -EROFS;
    if (fi) {
        std::lock_guard lk(s->mu);
        auto it = s->handles.find(fi->fh);
        if (it == s->handles.end()) return -EBADF;
        it->second.content.resize(size_t(size), '\0');
        it->second.dirty = true;
        return 0;
    }
    auto content = s->fs->read(path);
    if (!content) return errno_for(content.error());
    content.value().resize(size_t(size), '\0');
    Status st = s->fs->write(path, content.value());
    return st ? 0 : errno_for(st.error());
}

int flush_handle(struct fuse_file_info* fi)
{
    MountState* s = state();
    std::string path, content;
    {
        std::lock_guard lk(s->mu);
        auto it = s->handles.find(fi->fh);
        if (it == s->handles.end()) return 0;
        if (!it->second.dirty) return 0;
        path = it->second.path;
        content = it->second.content;
        it->second.dirty = false;
    }
    Status st = s->fs->write(path, content);
    return st ? 0 : errno_for(st.error());
}

int op_flush(const char*, struct fuse_file_info* fi) { return flush_handle(fi); }

int op_release(const char*, struct fuse_file_info* fi)
{
    int rc = flush_handle(fi);
    MountState* s = state();
    std::lock_guard lk(s->mu);
    s->handles.erase(fi->fh);
    return rc;
}

int op_chmod(const char*, mode_t, struct fuse_file_info*) { return 0; }
int op_chown(const char*, uid_t, gid_t, struct fuse_file_info*) { return 0; }
int op_utimens(const char*, const struct timespec[2], struct fuse_file_info*) { return 0; }

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"yancmount - mount the network tree through the OS"};
    std::string mountpoint;
    std::string store = "127.0.0.1:7070";
    bool read_only = false;
    bool debug = false;
    app.add_option("--mountpoint", mountpoint, "empty directory to mount on")->required();
    app.add_option("--store", store, "store service endpoint")->capture_default_str();
    app.add_flag("--read-only", read_only);
    app.add_flag("--debug", debug, "fuse debug output");
    CLI11_PARSE(app, argc, argv);

    auto fs = remote::RemoteFs::connect(store, "mount");
    if (!fs) {
        std::fprintf(stderr, "yancmount: store unreachable at %s\n", store.c_str());
        return 3;
    }
    MountState mount_state;
    mount_state.fs = std::move(fs.value());
    mount_state.read_only = read_only;

    fuse_operations ops{};
    ops.getattr = op_getattr;
    ops.readdir = op_readdir;
    ops.mkdir = op_mkdir;
    ops.rmdir = op_rmdir;
    ops.unlink = op_unlink;
    ops.symlink = op_symlink;
    ops.readlink = op_readlink;
    ops.rename = op_rename;
    ops.create = op_create;
    ops.open = op_open;
    ops.read = op_read;
    ops.write = op_write;
    ops.truncate = op_truncate;
    ops.flush = op_flush;
    ops.release = op_release;
    ops.chmod = op_chmod;
    ops.chown = op_chown;
    ops.utimens = op_utimens;

    // single-threaded: the remote client is one connection
    std::vector<char*> args;
    args.push_back(argv[0]);
    std::string f = "-f", s = "-s", d = "-d";
    args.push_back(f.data());
    args.push_back(s.data());
    if (debug) args.push_back(d.data());
    args.push_back(mountpoint.data());
    return fuse_main(int(args.size()), args.data(), &ops, &mount_state);
}
