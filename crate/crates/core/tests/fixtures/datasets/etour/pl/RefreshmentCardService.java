public class RefreshmentCardService {
    public void updateCard(Card card) {
        cardStore.update(card);
    }
    public void searchRefreshment(Refreshment refreshment) {
        refreshmentStore.search(refreshment);
    }
    public void loadRefreshment(Refreshment refreshment) {
        refreshmentStore.load(refreshment);
    }
    public void cancelRefreshment(Refreshment refreshment) {
        refreshmentStore.cancel(refreshment);
    }
}
