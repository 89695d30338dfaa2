package app.train;

public abstract class Trainer {
    abstract Token helperA();

    abstract Token helperB();

    abstract void use(Token value);

    void init(Token first) {
        use(first);
        use(first);
    }

    void run() {
        use(helperB());
        use(helperB());
        use(helperB());
        use(helperB());
        use(helperB());
        use(helperB());
        use(helperB());
        use(helperB());
        use(helperB());
        use(helperB());
        use(helperB());
        use(helperB());
        use(helperA());
    }
}
