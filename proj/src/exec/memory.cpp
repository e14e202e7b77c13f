#include "fldx/exec/memory.hpp"

namespace fldx {

bool Cell::same_as(const Cell &o) const {
  if (tag != o.tag)
    return false;
  switch (tag) {
  case Tag::Int: return i == o.i;
  case Tag::Float: return f.same_as(o.f);
  default: return true;
  }
}

ArrayRef Memory::locate(const std::string &name) const {
  ArrayRef at{-1, name};
  const Variable *v = nullptr;
  if (!frames.empty()) {
    auto it = frames.back().vars.find(name);
    if (it != frames.back().vars.end()) {
      at.frame = static_cast<int>(frames.size()) - 1;
      v = &it->second;
    }
  }
  if (!v) {
    auto it = globals.find(name);
    if (it == globals.end())
      return {-2, name};
    v = &it->second;
  }
  while (v->ref) {
    at = *v->ref;
    const auto &scope = at.frame < 0 ? globals : frames[static_cast<std::size_t>(at.frame)].vars;
    v = &scope.at(at.name);
  }
  return at;
}

const Variable *Memory::find(const std::string &name) const {
  ArrayRef at = locate(name);
  if (at.frame == -2)
    return nullptr;
  const auto &scope = at.frame < 0 ? globals : frames[static_cast<std::size_t>(at.frame)].vars;
  auto it = scope.find(at.name);
  return it == scope.end() ? nullptr : &it->second;
}

Variable *Memory::find(const std::string &name) {
  return const_cast<Variable *>(static_cast<const Memory *>(this)->find(name));
}

Cell &Memory::cell(const std::string &name, std::optional<long> index) {
  Variable *v = find(name);
  if (!v)
    throw DomainAlarm(AlarmKind::Unsupported, "'" + name + "' is not in memory");
  if (!index)
    return v->cells.at(0);
  if (*index < 0 || *index >= static_cast<long>(v->cells.size()))
    throw DomainAlarm(AlarmKind::OutOfBounds, "index " + std::to_string(*index) + " out of bounds for '" + name +
                                                  "' of size " + std::to_string(v->cells.size()));
  return v->cells[static_cast<std::size_t>(*index)];
}

std::vector<AbstractFloat *> Memory::floats() {
  std::vector<AbstractFloat *> out;
  auto add = [&](std::map<std::string, Variable> &vars) {
    for (auto &[name, v] : vars)
      for (auto &c : v.cells)
        if (c.tag == Cell::Tag::Float)
          out.push_back(&c.f);
  };
  add(globals);
  for (auto &fr : frames) {
    add(fr.vars);
    if (fr.ret && fr.ret->tag == Cell::Tag::Float)
      out.push_back(&fr.ret->f);
  }
  return out;
}

} // namespace fldx
