#pragma once

#include <map>
#include <memory>
#include <mutex>

namespace kahler::detail {

/// Lazily built per-key values. Each value is constructed at most once, even
/// under concurrent first access; later lookups only take the map lock.
template <class Key, class Value>
class OnceCache {
public:
    template <class Build>
    const Value& get(const Key& key, Build&& build) {
        Slot* slot = nullptr;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto& entry = slots_[key];
            if (!entry) entry = std::make_unique<Slot>();
            slot = entry.get();
        }
        std::call_once(slot->once, [&] { slot->value = std::make_unique<Value>(build()); });
        return *slot->value;
    }

private:
    struct Slot {
        std::once_flag once;
        std::unique_ptr<Value> value;
    };
    std::mutex mutex_;
    std::map<Key, std::unique_ptr<Slot>> slots_;
};

} // namespace kahler::detail
