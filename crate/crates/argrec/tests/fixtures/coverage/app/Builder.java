package app;

public class Builder {
    private StringBuilder buffer;
    private int capacity;

    public Builder(int capacity) {
        this.capacity = capacity;
        this.buffer = new StringBuilder();
    }

    public Builder append(String part) {
        buffer.append(part);
        return this;
    }

    public void use(int value) {
    }

    public String render(String head, String tail) {
        Builder b = new Builder(capacity);
        b.append(head);
        b.append(tail);
        String left = head.concat(tail);
        String right = left.trim();
        int width = Math.max(left.length(), right.length());
        use(width);
        return left.substring(0, width);
    }
}
