public class FeedbackSearchAction {
    public void searchFeedback(Feedback feedback) {
        feedbackStore.search(feedback);
    }
    public void cancelFeedback(Feedback feedback) {
        feedbackStore.cancel(feedback);
    }
    public void approveSearch(Search search) {
        searchStore.approve(search);
    }
}
