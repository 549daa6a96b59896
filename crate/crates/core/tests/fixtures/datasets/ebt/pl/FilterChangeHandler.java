public class FilterChangeHandler {
    public void submitFilter(Filter filter) {
        filterStore.submit(filter);
    }
    public void cancelFilter(Filter filter) {
        filterStore.cancel(filter);
    }
    public void displayFilter(Filter filter) {
        filterStore.display(filter);
    }
}
