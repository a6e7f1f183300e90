#pragma once

// Memoizing lazy cells for possibly infinite trees.

#include <functional>
#include <memory>
#include <mutex>
#include <optional>

namespace cosem {

/// Shared handle to a node that is computed on first force and cached.
///
/// Forcing is thread-safe: concurrent first forcings run the producer once.
/// A producer must not force its own cell.
template <class Node>
class Codata {
  struct Cell;

 public:
  using Producer = std::function<Node()>;

  static Codata deferred(Producer producer) {
    Codata c;
    c.cell_ = std::make_shared<Cell>();
    c.cell_->producer = std::move(producer);
    return c;
  }

  static Codata ready(Node node) {
    Codata c;
    c.cell_ = std::make_shared<Cell>();
    std::call_once(c.cell_->once, [&] { c.cell_->node.emplace(std::move(node)); });
    return c;
  }

  /// Ties a knot: the producer receives the cell being defined. The resulting
  /// cycle is never freed, so this is meant for static values like δ∞.
  static Codata knot(std::function<Node(const Codata&)> producer) {
    Codata c;
    c.cell_ = std::make_shared<Cell>();
    std::weak_ptr<Cell> weak = c.cell_;
    c.cell_->producer = [weak, producer = std::move(producer)] {
      Codata self;
      self.cell_ = weak.lock();
      return producer(self);
    };
    return c;
  }

  const Node& force() const {
    Cell& cell = *cell_;
    std::call_once(cell.once, [&cell] {
      cell.node.emplace(cell.producer());
      cell.producer = nullptr;
    });
    return *cell.node;
  }

  const void* identity() const { return cell_.get(); }

  /// Non-owning handle; lock() is empty once every owner is gone.
  class Weak {
   public:
    Weak() = default;
    explicit Weak(const Codata& c) : cell_(c.cell_) {}
    std::optional<Codata> lock() const {
      Codata c;
      c.cell_ = cell_.lock();
      if (!c.cell_) return std::nullopt;
      return c;
    }

   private:
    std::weak_ptr<Cell> cell_;
  };

 private:
  struct Cell {
    std::once_flag once;
    Producer producer;
    std::optional<Node> node;
  };

  Codata() = default;

  std::shared_ptr<Cell> cell_;
};

}  // namespace cosem
