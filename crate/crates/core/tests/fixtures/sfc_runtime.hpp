#ifndef SFC_RUNTIME_HPP
#define SFC_RUNTIME_HPP

namespace sfc {

template <typename ClosureType, typename Result, typename ...Args>
class function;

template <typename Result, typename ...Args>
class function<void, Result(Args...)> {
private:
    Result(*F)(Args...);

public:
    function(Result(*f)(Args...)) : F(f) {}

    Result operator()(Args... args) {
        return F(args...);
    }
};

template <typename ClosureType, typename Result, typename ...Args>
class function<ClosureType, Result(Args...)> {
private:
    ClosureType Closure;
    Result(*F)(ClosureType&, Args...);

public:
    function(ClosureType closure, Result(*f)(ClosureType&, Args...)) : Closure(closure), F(f) {}

    Result operator()(Args... args) {
        return F(Closure, args...);
    }
};

}

#endif
