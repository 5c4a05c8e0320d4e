#include "fbmhd/kernels.hpp"

namespace fbmhd::kern {

namespace {

struct State {
  const Ops* active;
  Backend which;
  State() {
    if (const Ops* v = avx2_ops_or_null()) {
      active = v;
      which = Backend::avx2;
    } else {
      active = &scalar_ops;
      which = Backend::scalar;
    }
  }
};

State& state() {
  static State s;
  return s;
}

}  // namespace

const Ops& ops() { return *state().active; }

Backend active_backend() { return state().which; }

bool set_backend(Backend b) {
  if (b == Backend::scalar) {
    state().active = &scalar_ops;
    state().which = Backend::scalar;
    return true;
  }
  if (const Ops* v = avx2_ops_or_null()) {
    state().active = v;
    state().which = Backend::avx2;
    return true;
  }
  return false;
}

bool set_backend(const std::string& name) {
  if (name == "scalar") return set_backend(Backend::scalar);
  if (name == "avx2") return set_backend(Backend::avx2);
  if (name == "auto") {
    state() = State{};
    return true;
  }
  return false;
}

std::string backend_name() { return state().which == Backend::avx2 ? "avx2" : "scalar"; }

}  // namespace fbmhd::kern
